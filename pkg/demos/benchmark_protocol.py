"""
Timing the bundled optimizers
=============================

The same harness behind the ``bench`` console command is callable as a
library.  Each spec is averaged over several runs with fresh seeded data;
only the optimize call sits inside the timing window, and every row
reports the full objective at the returned parameters so rows are
comparable across methods.

The command line equivalent of the loop below is:

    bench --d 10 --n 1000 --optimizer lbfgs --runs 5 --max-iterations 10

One honest caveat about fixed defaults: gradient descent's constant step
is too large for this problem's scale, so its final-objective column
shows divergence rather than progress.  The harness reports it as is;
scaling data or tuning step sizes is the caller's job.
"""

from numopt.bench import BenchSpec, emit_report, run_bench

records = []
for optimizer in ("lbfgs", "gd", "sgd", "adam", "sa"):
    spec = BenchSpec(
        problem="linear",
        d=10,
        n=1000,
        optimizer=optimizer,
        runs=5,
        max_iterations=10,
        seed=0,
        noise_scale=10.0,
    )
    records.append(run_bench(spec))

print(emit_report(records, format="csv"))
print(emit_report(records, format="markdown"))

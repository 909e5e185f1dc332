"""Sequential large verification runs; waits for the criterion-2 run first.

Each run writes runs/<name>.report.json.  Seeds and strata are recorded in
the reports themselves.
"""

import json
import os
import time

from llschain.verify import FamilyConfig, verify_family

HERE = os.path.dirname(os.path.abspath(__file__))


def wait_for_c2():
    ck = os.path.join(HERE, "criterion2_full.ck")
    while True:
        try:
            with open(ck) as fh:
                done = json.load(fh)["done"]
        except (OSError, ValueError):
            done = 0
        if done >= 1_385_670:
            return
        time.sleep(30)


RUNS = [
    ("c4_le1_sample_1e6", dict(g=23, r=6, d=26, stratum="le1_swap",
                               mode="sampled", n=1_000_000, seed=232_323)),
    ("c4_two_swap_sample_5e5", dict(g=23, r=6, d=26, stratum="two_swap",
                                    mode="sampled", n=500_000, seed=232_326)),
    ("c3_has_swap_prefix_1e6", dict(g=22, r=6, d=25, stratum="has_swap",
                                    limit=1_000_000)),
    ("c3_swap_free_sample_5e5", dict(g=22, r=6, d=25, stratum="swap_free",
                                     mode="sampled", n=500_000, seed=202_206)),
]


def main():
    wait_for_c2()
    for name, kw in RUNS:
        out = os.path.join(HERE, f"{name}.report.json")
        if os.path.exists(out):
            continue
        t0 = time.time()
        report = verify_family(FamilyConfig(
            jobs=1, chunk_size=5000,
            checkpoint_path=os.path.join(HERE, f"{name}.ck"),
            **kw,
        ))
        obj = report.to_json()
        obj["wall_seconds"] = round(time.time() - t0, 1)
        with open(out, "w") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
        print(name, "done:", obj["verified"], "verified,", obj["failed"], "failed",
              flush=True)


if __name__ == "__main__":
    main()

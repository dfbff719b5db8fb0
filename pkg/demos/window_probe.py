"""Probe Chatterjea maps whose least coefficient lies below 2.

Prints region counts and the first counterexample, then regenerates it
from its trial index to show that the report is reproducible.
"""

import sys

from pbmetric.search import GenConfig, instance, probe
from pbmetric.serialize import space_to_dict


def main(trials=5000):
    cfg = GenConfig(target="s-window", trials=trials)
    rep = probe(cfg)
    for region, counts in sorted(rep.subcounts.items()):
        print(f"{region:>6}: {counts}")
    print(f"injected four-point example: {rep.injected}")
    if rep.counterexamples:
        rec = rep.counterexamples[0]
        print(f"first counterexample, trial {rec['trial']} (seed {rec['seed']}): {rec['reason']}")
        print(f"  s_min {rec['s_min']}, Chatterjea constant {rec['lam']}")
        space, T = instance(cfg, rec["trial"])
        print(f"  regenerated identically: {space_to_dict(space) == rec['space']}")
        print(f"  map {T.table}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 5000)

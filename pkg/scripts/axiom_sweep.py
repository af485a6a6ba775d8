#!/usr/bin/env python3
"""Sweep the lifting axioms and support laws across the functor catalog.

Runs the exhaustive relation-lifting checks (order/composition laws, converse
compatibility, quasi-functoriality, graph restriction) and the support
restriction for every built-in functor shape, printing one report block per
functor.  Exit status 0 iff every check passes.
"""

import argparse
import sys
import time

from nablamu import (
    IDENTITY,
    MONOTONE,
    POWERSET,
    check_lax_axioms,
    check_support_restriction,
    compose,
    constant,
    coproduct,
    functor_tag,
    product,
)

CATALOG = [
    (POWERSET, None),
    (MONOTONE, None),
    (IDENTITY, None),
    (constant(("a", "b")), None),
    (product(POWERSET, IDENTITY), None),
    (coproduct(POWERSET, constant(("a",))), None),
    (compose(POWERSET, POWERSET), None),
]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--carrier-bound",
        type=int,
        default=2,
        help="largest carrier size in the exhaustive sweeps (default 2)",
    )
    parser.add_argument(
        "--powerset-bound",
        type=int,
        default=3,
        help="carrier bound used for the powerset functor alone (default 3)",
    )
    args = parser.parse_args(argv)

    all_ok = True
    for F, _ in CATALOG:
        bound = args.powerset_bound if F is POWERSET else args.carrier_bound
        start = time.monotonic()
        axioms = check_lax_axioms(F, carrier_bound=bound)
        support = check_support_restriction(F, carrier_bound=bound)
        elapsed = time.monotonic() - start
        verdict = "ok" if axioms.ok and support.ok else "FAILED"
        print(f"== {functor_tag(F)} (carriers <= {bound}, {elapsed:.1f}s): {verdict}")
        for name, (passed, witness) in sorted(axioms.checks.items()):
            mark = "pass" if passed else f"FAIL at {witness!r}"
            print(f"   axiom  {name}: {mark}")
        for name, (passed, witness) in sorted(support.checks.items()):
            mark = "pass" if passed else f"FAIL at {witness!r}"
            print(f"   support {name}: {mark}")
        all_ok = all_ok and axioms.ok and support.ok
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())

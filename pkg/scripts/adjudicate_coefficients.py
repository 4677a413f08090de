"""Decide between competing coefficient candidates by brute-force evaluation.

Three questions are answered on random data:
  * which trace weight a3 makes the dev-sym curvature form equal the sym form;
  * which constants turn |DR|^2 into a quadratic form in the dislocation density;
  * which trace weight makes the dislocation-density form equal the wryness form.
"""

import argparse

import numpy as np

from cosserat_shell import verification as ver


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--instances", type=int, default=1000)
    args = ap.parse_args()
    g = np.random.default_rng(args.seed).spawn(3)

    a3 = ver.suite_a3(g[0], args.instances, 10)
    print("a3 candidates (max rel residual over", a3.instances, "evaluations)")
    print(f"  (12 b3 - b1)/3 : {a3.details['printed']:.3e}")
    print(f"  (b1 + 3 b3)/3  : {a3.details['expansion']:.3e}")
    print("  verified:", a3.details["verified"])

    dr = ver.suite_dr_identity(g[1], args.instances)
    print("\n|DR|^2 = c1 |dev sym alpha|^2 + c2 |skew alpha|^2 + c3 tr(alpha)^2")
    for k, c in ver.DR_CANDIDATES.items():
        print(f"  {c}: {dr.details[k]:.3e}")
    print("  verified:", dr.details["verified"])

    ag = ver.alpha_gamma_residuals(g[2], args.instances)
    print("\nalpha form vs Gamma form (max rel residual)")
    print(f"  same b weights   : {ag['same_b']:.3e}")
    print(f"  b3 -> b3 - b1    : {ag['b3_minus_b1']:.3e}")

    w = ver.anisotropy_witness_record()
    print("\nK-hat anisotropy witness: direction-e3 energy", f"{w['energy_before']:.3g} -> {w['energy_after']:.3g}",
          f"(relative change {w['relative_change']:.3g}); Gamma-form energy",
          f"{w['w_curv_gamma_before']:.6g} -> {w['w_curv_gamma_after']:.6g}")


if __name__ == "__main__":
    main()

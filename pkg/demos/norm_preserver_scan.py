"""Which matrices preserve the p-norm when p is not 2?

Numerically: only matrices that are a permutation times a diagonal of
unimodular phases (real case: signed permutations).  This script checks a
few matrices by hand, runs the randomized scan, and finishes with the exact
coefficient-expansion certificate for even p.
"""

from fractions import Fraction

import numpy as np

from qvlab.normlaws import (island_scan, preserves_pnorm_formal_even,
                            preserves_pnorm_numeric)


def describe(name, verdict):
    flag = "preserves" if verdict.preserves else "breaks"
    print(f"  {name}: {flag} (residual {verdict.residual:.3e})")
    if not verdict.preserves and verdict.witness_vector is not None:
        print(f"    witness vector: {np.round(verdict.witness_vector, 4)}")


def main():
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    sp = np.array([[0.0, -1.0], [1.0, 0.0]])

    print("numeric check at p = 4:")
    describe("hadamard", preserves_pnorm_numeric(h, 4.0))
    describe("signed permutation", preserves_pnorm_numeric(sp, 4.0))

    print("\nnumeric check at p = 2 (everything orthogonal passes):")
    describe("hadamard", preserves_pnorm_numeric(h, 2.0))

    # Randomized scan: three ensembles that should contain no preservers,
    # one generalized-diagonal ensemble that must pass wholesale.
    report = island_scan(3, 4.0, num_matrices=3000, seed=11)
    print(f"\nisland scan (n=3, p=4): passed={report.passed}")
    for key in sorted(report.residuals):
        if key.endswith(".preserving"):
            print(f"  {key}: {report.residuals[key]}")

    # For even integer p the check can be done exactly: expand
    # sum_j |sum_k a_jk v_k|^p symbolically and compare coefficients against
    # sum_k |v_k|^p.  Rational entries make the verdict exact, no tolerance.
    exact_sp = [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(0)]]
    verdict = preserves_pnorm_formal_even(exact_sp, 4)
    print(f"\nformal p=4 verdict on the signed permutation: {verdict.preserves}"
          f" (mode {verdict.details['mode']})")
    print("  column condition residual:",
          verdict.details["column_condition_residual"])

    perturbed = sp + 1e-3
    verdict = preserves_pnorm_formal_even(perturbed, 4)
    print(f"formal p=4 verdict after a 1e-3 perturbation: {verdict.preserves}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Print an aligned bound-state energy table for one filament configuration.

Rows cover n <= n-max, k <= k-max and the requested longitudinal indices;
columns compare the exact energy with its quasirelativistic and shifted
nonrelativistic approximations so the convergence of the expansions is
visible level by level.
"""

import argparse

from psdirac import spectra


def parse_args(argv):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mass", type=float, default=1.0)
    ap.add_argument("--g-factor", type=float, default=2.0)
    ap.add_argument("--magneton", type=float, default=0.5)
    ap.add_argument("--omega", type=float, default=1.0, help="2 x filament current")
    ap.add_argument("--box-length", type=float, default=7.0)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--k-max", type=int, default=3)
    ap.add_argument("--ntilde-max", type=int, default=1, help="longitudinal index runs -max..max")
    return ap.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    p = spectra.SpectrumParams(
        m=args.mass, g=args.g_factor, mu0=args.magneton, omega=args.omega, L=args.box_length
    )
    lt = spectra.coupling_lambda_tilde(p)
    print(f"# m = {p.m:g}, lambda_tilde = {lt:g}, L = {p.L:g}")
    header = f"{'n':>3} {'k':>3} {'N':>3} {'Nt':>4} {'kappa':>10} {'E_exact':>20} {'E_quasirel':>20} {'E_nonrel':>20}"
    print(header)
    print("-" * len(header))
    rows = []
    for n in range(args.n_max + 1):
        for k in range(args.k_max + 1):
            N = 2 * (n + k) + 1
            for nt in range(-args.ntilde_max, args.ntilde_max + 1):
                kappa = spectra.quantized_kappa(p.L, nt)
                rows.append(
                    (
                        N, k, nt, n, kappa,
                        spectra.relativistic_energy(p.m, lt, kappa, N),
                        spectra.quasirel_energy(p.m, lt, kappa, N),
                        spectra.nonrel_lab_energy(p.m, lt, kappa, N),
                    )
                )
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    for N, k, nt, n, kappa, exact, quasi, nonrel in rows:
        print(
            f"{n:>3} {k:>3} {N:>3} {nt:>4} {kappa:>10.5f} "
            f"{exact:>20.15f} {quasi:>20.15f} {nonrel:>20.15f}"
        )
    degeneracy = {}
    for N, k, nt, *_ in rows:
        degeneracy[(N, nt)] = degeneracy.get((N, nt), 0) + 1
    widest = max(degeneracy.values())
    print(f"# largest listed degeneracy class: {widest} states sharing one (N, Nt)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

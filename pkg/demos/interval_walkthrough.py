"""The interval example: p(x, y) = |x - y|^2 on [0, 1] with T x = exp(x - 2)."""

import math

from pbmetric import iterate, minimal_coefficient, run_perturbed, stability_condition
from pbmetric.golden import example2_map, example2_space
from pbmetric.picard import step_ratios
from pbmetric.stability import StabilityParams, geometric_noise, scaled_fixed_point


def main():
    space, T = example2_space(), example2_map()
    print(f"sampled least coefficient on a {space.grid}-point grid: {minimal_coefficient(space):.4f}")

    tr = iterate(space, T, 1.0, max_iter=200, tol=1e-24)
    u = tr.fixed_point
    print(f"Picard from 1: u = {u:.15f} after {tr.iterations} steps, "
          f"residual {abs(u - math.exp(u - 2)):.1e}")
    ratios = step_ratios(space, tr, u, floor=1e-20)
    print(f"largest step ratio {max(ratios):.5f} vs exp(-2) = {math.exp(-2):.5f}")

    params = StabilityParams((math.exp(-2.0), 0.0, 0.0, 0.0, 0.0), 4.0)
    cond = stability_condition(params)
    print(f"stability condition at s = 4: lhs {cond.lhs:.4f} < 2 is {cond.holds}")

    trial = run_perturbed(space, T, u, scaled_fixed_point, 10_000, params=params)
    print(f"y_n = n/(n+1) u: drift {trial.raw_drift[-1]:.2e}, p(y_N, u) {trial.a[-1]:.2e}, "
          f"{trial.verdict}")
    for seed in range(3):
        noisy = run_perturbed(space, T, u, geometric_noise(r=0.5, seed=seed), 200)
        print(f"geometric noise, seed {seed}: {noisy.verdict}")


if __name__ == "__main__":
    main()

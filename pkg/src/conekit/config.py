"""Central numeric defaults.

All tolerances and cutover points that more than one module relies on live
here, so tuning happens in exactly one place.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Defaults:
    # --- Bessel engine -------------------------------------------------
    # Target relative accuracy of single evaluations inside the validated
    # region (order <= 200, argument in [1e-6, 500]).
    bessel_target_rel: float = 1e-12
    # Power series for I_nu(r) is used for r <= max(series_r_max, nu/2).
    series_r_max: float = 10.0
    # Uniform (large-order) asymptotics take over at this order.
    olver_nu_min: float = 30.0
    # Temme's series for K is used for r <= this, continued fractions above.
    temme_r_max: float = 2.0
    # Scaled values are folded into a plain float when |log2 value| <= this.
    fold_exp2: int = 600
    # Wronskian residual considered acceptable in self-checks.
    wronskian_tol: float = 1e-10

    # --- Resolvent series ----------------------------------------------
    # Default relative tolerance for kernel values.
    kernel_rel_tol: float = 1e-8
    # Tail certification requires r< / r> at or below this ratio.
    certified_ratio: float = 0.25
    # Heuristic stop: this many consecutive terms below the target.
    heuristic_run: int = 3

    # --- Mode-table sizing ----------------------------------------------
    # mu_cutoff defaults to max(mu_cutoff_floor, mu0 + mu_cutoff_margin).
    mu_cutoff_floor: float = 40.0
    mu_cutoff_margin: float = 30.0

    # --- Riesz lambda integral -------------------------------------------
    riesz_rel_tol: float = 1e-6
    # Upper limit lambda_max = pad * log(1/tol) / dist(z, z'); the pad
    # absorbs the polynomial prefactor on the e^{-lambda dist} decay.
    lambda_max_pad: float = 1.5

    # --- Lp probes --------------------------------------------------------
    probe_tol: float = 1e-6
    probe_iter_cap: int = 200
    probe_growth_ratio: float = 4.0
    probe_stable_ratio: float = 1.5


DEFAULTS = Defaults()

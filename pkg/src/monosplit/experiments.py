"""Reproducible problem generators and benchmark drivers.

Each generator draws every array from its own PCG64 substream keyed by
(seed, array index), so instances reproduce bitwise for a given seed on
any platform and adding arrays later cannot shift existing draws.
Stream allocation is part of each generator's contract and is listed in
its docstring.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .operators import (ForwardOperator, l1_resolvent, make_affine_forward,
                        make_lasso_forward, soft_threshold,
                        symmetric_affine_resolvent)
from .splitting import (StopRule, fb, fbf, frb, gfrb_adaptive, gfrb_fixed,
                        rfb)
from .stepsize import GammaSpec, make_stepsize_state

SOLVERS = ("gfrb_adaptive", "gfrb_fixed", "frb", "fbf", "rfb", "fb")
PROBLEMS = ("example1", "example2", "lasso")


@dataclass
class InclusionInstance:
    """A generated problem 0 in (A + B)(x) with optional known solution."""

    name: str
    resolvent_a: object
    forward_b: object
    dim: int
    seed: int
    x_star: np.ndarray = None
    data: dict = field(default_factory=dict)


def gen_example1(m, seed=0):
    """Sparse shift problem: A = l1 subdifferential, B(x) = 2x + b.

    Streams: 0 -> b (m standard normals).  The solution is known in
    closed form, x*_i = -soft(b_i, 1) / 2, and is attached as x_star.
    """
    b = rng.standard_normal(rng.substream(seed, 0), m)
    forward = ForwardOperator(lambda x: 2.0 * x + b, lipschitz_hint=2.0)
    x_star = -soft_threshold(b, 1.0) / 2.0
    return InclusionInstance(name="example1", resolvent_a=l1_resolvent(),
                             forward_b=forward, dim=m, seed=seed,
                             x_star=x_star, data={"b": b})


def gen_example2(m, seed=10):
    """Dense monotone pair: linear A = E + beta*I, affine skewed B.

    Streams: 0 -> R, 1 -> Rbar, 2 -> G (each m*m standard normals,
    row-major), 3 -> b.  E = (R + R^T)/2 with beta = max |eig(E)| makes
    A maximally monotone; B(x) = M x + b with
    M = G^T + (Rbar - Rbar^T)/2 + shift*I and
    shift = max(0, -lambda_min(sym(G))) + 0.1, so sym(M) is positive
    definite and B is monotone with L = ||M||_2.  Both operators are
    single-valued, so the solution solves a linear system and is
    attached as x_star.
    """
    R = rng.standard_normal(rng.substream(seed, 0), (m, m))
    Rbar = rng.standard_normal(rng.substream(seed, 1), (m, m))
    G = rng.standard_normal(rng.substream(seed, 2), (m, m))
    b = rng.standard_normal(rng.substream(seed, 3), m)
    E = 0.5 * (R + R.T)
    S = 0.5 * (Rbar - Rbar.T)
    sym_G = 0.5 * (G + G.T)
    shift = max(0.0, -float(np.min(np.linalg.eigvalsh(sym_G)))) + 0.1
    M = G.T + S + shift * np.eye(m)
    beta = float(np.max(np.abs(np.linalg.eigvalsh(E))))
    resolvent = symmetric_affine_resolvent(E, beta)
    forward = make_affine_forward(M, b)
    x_star = np.linalg.solve(E + beta * np.eye(m) + M, -b)
    return InclusionInstance(name="example2", resolvent_a=resolvent,
                             forward_b=forward, dim=m, seed=seed,
                             x_star=x_star,
                             data={"E": E, "M": M, "b": b, "beta": beta})


def gen_lasso(m=256, n=1024, k=20, noise_sigma=0.01, reg_lambda=0.01,
              seed=0):
    """Sparse recovery instance for the l1-regularized least squares.

    Streams: 0 -> design matrix entries (m*n normals, scaled 1/sqrt(m)),
    1 -> candidate signal values (n normals), 2 -> support scores
    (n uniforms; the k smallest mark the support), 3 -> observation
    noise (m normals, scaled noise_sigma).  The true signal keeps the
    stream-1 normals on the support and is attached in
    data['x_true']; x_star stays None because the minimizer has no
    closed form.
    """
    A = rng.standard_normal(rng.substream(seed, 0), (m, n)) / np.sqrt(m)
    values = rng.standard_normal(rng.substream(seed, 1), n)
    scores = rng.substream(seed, 2).random(n)
    support = np.argsort(scores)[:k]
    x_true = np.zeros(n)
    x_true[support] = values[support]
    noise = noise_sigma * rng.standard_normal(rng.substream(seed, 3), m)
    y = A @ x_true + noise
    forward = make_lasso_forward(A, y)
    return InclusionInstance(name="lasso", resolvent_a=l1_resolvent(reg_lambda),
                             forward_b=forward, dim=n, seed=seed,
                             data={"A": A, "y": y, "x_true": x_true,
                                   "support": support,
                                   "reg_lambda": reg_lambda})


def gen_composite(n=40, m_rows=30, seed=0):
    """Composite instance min 0.5*||x - p||^2 + ||K x||_1 as a three-part
    inclusion 0 in (A + B + K* C K)(x).

    Streams: 0 -> coupling matrix entries (m_rows*n normals, scaled
    1/sqrt(m_rows)), 1 -> anchor p (n normals).  A = 0 (identity
    resolvent), B(x) = x - p with L = 1, C is the l1 subdifferential
    acting on K x.  B is strongly monotone, so the solution is unique:
    x* = p - K^T y* with y* the box-constrained dual minimizer.
    """
    from .operators import LinearMap, l1_resolvent, zero_resolvent
    from .primal_dual import CompositeProblem

    K = rng.standard_normal(rng.substream(seed, 0), (m_rows, n)) \
        / np.sqrt(m_rows)
    p = rng.standard_normal(rng.substream(seed, 1), n)
    forward = ForwardOperator(lambda x: x - p, lipschitz_hint=1.0)
    problem = CompositeProblem(resolvent_a=zero_resolvent(),
                               forward_b=forward,
                               linmap_k=LinearMap.from_matrix(K),
                               resolvent_c=l1_resolvent(),
                               x0=np.zeros(n), y0=np.zeros(m_rows))
    return problem, {"K": K, "p": p}


def snr(x_star, x):
    """Recovery quality 20*log10(||x*|| / ||x - x*||) in dB.

    Exact recovery returns inf; a zero reference signal is a domain
    error.
    """
    ref = float(np.linalg.norm(x_star))
    if ref == 0.0:
        raise ValueError("snr undefined for a zero reference signal")
    gap = float(np.linalg.norm(np.asarray(x) - np.asarray(x_star)))
    if gap == 0.0:
        return np.inf
    return 20.0 * np.log10(ref / gap)


def mean_iteration_seconds(trace):
    """Average seconds per iteration, excluding the warm-up first pass."""
    if len(trace) == 0:
        return 0.0
    if len(trace) == 1:
        return trace.elapsed[0]
    return (trace.elapsed[-1] - trace.elapsed[0]) / (len(trace) - 1)


@dataclass
class ExperimentConfig:
    """Flat, JSON-mappable description of one benchmark run."""

    problem: str = "example1"
    solvers: tuple = ("gfrb_adaptive", "gfrb_fixed", "frb", "fbf", "rfb")
    m: int = 200
    n: int = 1024
    k: int = 20
    seed: int = 0
    delta: float = 0.1
    lam: float = None
    lambda0: float = 0.1
    lambda_minus1: float = None
    epsilon: float = 1e-4
    c1: float = None
    c2: float = None
    gamma_kind: str = "geometric"
    gamma_ratio: float = 0.5
    gamma_scale: float = 1.0
    tol: float = 1e-6
    max_iter: int = 5000
    x0_kind: str = "ones"
    noise_sigma: float = 0.01
    reg_lambda: float = 0.01
    # Optional primal-dual step pair, checked by validate-config against
    # the admissibility inequality when all four are present.
    tau: float = None
    sigma: float = None
    b_reflect: float = 0.0
    lipschitz: float = None
    norm_k: float = None


_CONFIG_TYPES = {
    "problem": str, "solvers": (list, tuple), "m": int, "n": int, "k": int,
    "seed": int, "delta": (int, float), "lam": (int, float, type(None)),
    "lambda0": (int, float), "lambda_minus1": (int, float, type(None)),
    "epsilon": (int, float), "c1": (int, float, type(None)),
    "c2": (int, float, type(None)), "gamma_kind": str,
    "gamma_ratio": (int, float), "gamma_scale": (int, float),
    "tol": (int, float), "max_iter": int, "x0_kind": str,
    "noise_sigma": (int, float), "reg_lambda": (int, float),
    "tau": (int, float, type(None)), "sigma": (int, float, type(None)),
    "b_reflect": (int, float), "lipschitz": (int, float, type(None)),
    "norm_k": (int, float, type(None)),
}


def config_from_dict(d):
    """Strict loader: unknown keys, bad types and bad values all raise
    ValueError naming the offending field."""
    if not isinstance(d, dict):
        raise ValueError("config root must be a JSON object")
    cfg = ExperimentConfig()
    for key, value in d.items():
        if key not in _CONFIG_TYPES:
            raise ValueError(f"config field '{key}': unknown field")
        expected = _CONFIG_TYPES[key]
        if isinstance(value, bool) or not isinstance(value, expected):
            raise ValueError(f"config field '{key}': bad type "
                             f"{type(value).__name__}")
        setattr(cfg, key, tuple(value) if key == "solvers" else value)
    if cfg.problem not in PROBLEMS:
        raise ValueError(f"config field 'problem': must be one of {PROBLEMS}")
    for s in cfg.solvers:
        if s not in SOLVERS:
            raise ValueError(f"config field 'solvers': unknown solver {s!r}")
    if not cfg.solvers:
        raise ValueError("config field 'solvers': must not be empty")
    if cfg.x0_kind not in ("ones", "zeros"):
        raise ValueError("config field 'x0_kind': must be 'ones' or 'zeros'")
    for key in ("m", "n", "k", "max_iter"):
        if getattr(cfg, key) <= 0:
            raise ValueError(f"config field '{key}': must be positive")
    for key in ("lambda0", "tol"):
        if getattr(cfg, key) <= 0:
            raise ValueError(f"config field '{key}': must be positive")
    if cfg.gamma_kind not in ("geometric", "inverse_square", "zero"):
        raise ValueError("config field 'gamma_kind': must be 'geometric', "
                         "'inverse_square' or 'zero'")
    return cfg


def validate_config(cfg):
    """Check parameter boxes without running anything.

    Raises ValueError naming the offending field: the adaptive (c1, c2)
    box against delta and epsilon, and, when a primal-dual step pair is
    configured, the admissibility inequality
    2*tau*(1+|b|)*L + tau*sigma*||K||^2 < 1.
    """
    from .primal_dual import check_stepsizes
    from .stepsize import coefficient_bound, validate_coefficients

    if not 0.0 < cfg.epsilon < 1.0:
        raise ValueError("config field 'epsilon': must lie in (0, 1)")
    bound = coefficient_bound(cfg.delta, cfg.epsilon)
    c2 = cfg.c2 if cfg.c2 is not None else 0.99 * bound
    c1 = cfg.c1 if cfg.c1 is not None else 0.9 * c2
    try:
        validate_coefficients(c1, c2, cfg.delta, cfg.epsilon)
    except ValueError as exc:
        raise ValueError(f"config fields 'c1'/'c2': {exc}") from exc
    if cfg.lam is not None and cfg.lam <= 0.0:
        raise ValueError("config field 'lam': must be positive")
    pd_fields = (cfg.tau, cfg.sigma, cfg.lipschitz, cfg.norm_k)
    if any(v is not None for v in pd_fields):
        if any(v is None for v in pd_fields):
            raise ValueError("config field 'tau': the primal-dual check "
                             "needs tau, sigma, lipschitz and norm_k "
                             "together")
        try:
            ok, slack = check_stepsizes(cfg.tau, cfg.sigma, cfg.b_reflect,
                                        cfg.lipschitz, cfg.norm_k)
        except ValueError as exc:
            raise ValueError(f"config field 'tau': {exc}") from exc
        if not ok:
            raise ValueError(
                f"config fields 'tau'/'sigma': step pair violates "
                f"2*tau*(1+|b|)*L + tau*sigma*normK^2 < 1 "
                f"(slack {slack:g})")
    return cfg


def generate(cfg):
    """Instance for cfg.problem with the configured sizes and seed."""
    if cfg.problem == "example1":
        return gen_example1(cfg.m, cfg.seed)
    if cfg.problem == "example2":
        return gen_example2(cfg.m, cfg.seed)
    if cfg.problem == "lasso":
        return gen_lasso(cfg.m, cfg.n, cfg.k, cfg.noise_sigma,
                         cfg.reg_lambda, cfg.seed)
    raise ValueError(f"unknown problem {cfg.problem!r}")


_STEP_BOUNDS = {
    "gfrb_fixed": lambda L, delta: 1.0 / (2.0 * L * (1.0 + abs(delta))),
    "frb": lambda L, delta: 1.0 / (2.0 * L),
    "fbf": lambda L, delta: 1.0 / L,
    "rfb": lambda L, delta: (np.sqrt(2.0) - 1.0) / L,
    "fb": lambda L, delta: 1.0 / L,
}


def default_fixed_step(solver, L, delta=0.0):
    """90% of the solver's convergence bound for an L-Lipschitz forward."""
    if L is None or L <= 0.0:
        raise ValueError(f"{solver} needs an explicit step: the forward "
                         "operator has no usable Lipschitz constant")
    return 0.9 * _STEP_BOUNDS[solver](L, delta)


@dataclass
class RunResult:
    """Outcome of one (problem, solver) run."""

    problem: str
    solver: str
    m: int
    n: int
    seed: int
    iterations: int
    final_err: float
    elapsed_s: float
    converged: bool
    x: np.ndarray
    trace: object


def run_solver(instance, solver, cfg):
    """Run one solver from the configured seeds and wrap the outcome."""
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}")
    stop = StopRule(tol=cfg.tol, max_iter=cfg.max_iter)
    x0 = np.ones(instance.dim) if cfg.x0_kind == "ones" \
        else np.zeros(instance.dim)
    A, B = instance.resolvent_a, instance.forward_b
    L = B.lipschitz_hint
    if solver == "gfrb_adaptive":
        gamma = GammaSpec(kind=cfg.gamma_kind, ratio=cfg.gamma_ratio,
                          scale=cfg.gamma_scale)
        state = make_stepsize_state(cfg.delta, cfg.lambda0,
                                    cfg.lambda_minus1, cfg.epsilon,
                                    cfg.c1, cfg.c2, gamma)
        x, trace = gfrb_adaptive(A, B, x0, x0, cfg.delta, state, stop)
    else:
        lam = cfg.lam if cfg.lam is not None else \
            default_fixed_step(solver, L, cfg.delta)
        if solver == "gfrb_fixed":
            x, trace = gfrb_fixed(A, B, x0, x0, x0, lam, cfg.delta, stop)
        elif solver == "frb":
            x, trace = frb(A, B, x0, x0, lam, stop)
        elif solver == "fbf":
            x, trace = fbf(A, B, x0, lam, stop)
        elif solver == "rfb":
            x, trace = rfb(A, B, x0, x0, lam, stop)
        else:
            x, trace = fb(A, B, x0, lam, stop)
    iterations = len(trace)
    return RunResult(problem=instance.name, solver=solver, m=cfg.m,
                     n=instance.dim, seed=cfg.seed, iterations=iterations,
                     final_err=trace.errs[-1] if iterations else 0.0,
                     elapsed_s=trace.elapsed[-1] if iterations else 0.0,
                     converged=trace.converged, x=x, trace=trace)


def summary_header():
    return "problem,solver,m,n,seed,iters,final_err,elapsed_s"


def summary_row(result):
    return (f"{result.problem},{result.solver},{result.m},{result.n},"
            f"{result.seed},{result.iterations},{result.final_err:.17g},"
            f"{result.elapsed_s:.17g}")


def run_benchmark(cfg, out_dir=None):
    """Run every configured solver on the configured problem.

    Returns the list of RunResults; with out_dir set, writes
    summary.csv plus one <solver>_trace.csv per run.
    """
    instance = generate(cfg)
    results = [run_solver(instance, solver, cfg) for solver in cfg.solvers]
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "summary.csv"), "w") as fh:
            fh.write(summary_header() + "\n")
            for res in results:
                fh.write(summary_row(res) + "\n")
        for res in results:
            res.trace.to_csv(os.path.join(out_dir, f"{res.solver}_trace.csv"))
    return results

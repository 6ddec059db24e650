"""Forward-backward style splitting iterations for 0 in (A + B)(x).

All solvers share the same calling convention: a resolvent for the
set-valued part A, a point evaluation for the single-valued part B,
seed iterates, and a StopRule.  They return the final iterate together
with an IterationTrace whose rows are (k, err, lambda, elapsed_s) with
err_k = ||x_{k+1} - x_k||.

The three reflected multi-step methods (frb, gfrb_fixed, gfrb_adaptive)
route through one shared update kernel so that their analytic reductions
(delta = 0, constant step) hold bitwise, not just to rounding.
"""

import time
import warnings
from dataclasses import dataclass

import numpy as np

from .stepsize import next_step, validate_coefficients

DIVERGENCE_LIMIT = 1e12


class StepSizeWarning(UserWarning):
    """A fixed step at or beyond the convergence-theory bound."""


class DivergenceError(RuntimeError):
    """Iteration blew past DIVERGENCE_LIMIT or produced non-finite values.

    Carries the trace recorded up to and including the offending row.
    """

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass
class StopRule:
    """Stop when ||x_{k+1} - x_k|| <= tol, or after max_iter iterations."""

    tol: float = 1e-6
    max_iter: int = 5000


class IterationTrace:
    """Per-iteration log: k, displacement err, step lambda, elapsed seconds."""

    def __init__(self):
        self.ks = []
        self.errs = []
        self.lambdas = []
        self.elapsed = []
        self.converged = False

    def append(self, k, err, lam, elapsed_s):
        self.ks.append(int(k))
        self.errs.append(float(err))
        self.lambdas.append(float(lam))
        self.elapsed.append(float(elapsed_s))

    def __len__(self):
        return len(self.ks)

    def rows(self):
        return list(zip(self.ks, self.errs, self.lambdas, self.elapsed))

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("k,err,lambda,elapsed_s\n")
            for k, err, lam, el in self.rows():
                fh.write(f"{k},{err:.17g},{lam:.17g},{el:.17g}\n")


def _resolve(A, z, lam):
    res = getattr(A, "resolve", None)
    return res(z, lam) if res is not None else A(z, lam)


def _lipschitz_hint(B):
    return getattr(B, "lipschitz_hint", None)


def _require_positive_step(lam):
    if not np.isfinite(lam) or lam <= 0.0:
        raise ValueError(f"step lambda must be positive and finite, got {lam!r}")


def _warn_if_beyond(lam, bound, method):
    if bound is not None and lam >= bound:
        warnings.warn(
            f"{method}: step {lam:g} is at or beyond the convergence bound "
            f"{bound:g}; iterating anyway", StepSizeWarning, stacklevel=3)


def _check_divergence(err, x_new, trace, method):
    if not np.isfinite(err) or err > DIVERGENCE_LIMIT or \
            not np.all(np.isfinite(x_new)):
        raise DivergenceError(
            f"{method} diverged at iteration {trace.ks[-1]} "
            f"(err={err:g}); trace attached", trace)


def _reflected_target(x, Bx, Bx_p, Bx_pp, lam, lam_p, lam_pp, delta):
    # Shared kernel: x - lam*Bx - lam_p*(1+delta)*(Bx - Bx_p)
    #                  + lam_pp*delta*(Bx_p - Bx_pp).
    # At delta = 0 the last term is an exact zero multiple, which is what
    # makes the frb reduction bitwise.
    return (x - lam * Bx
            - lam_p * (1.0 + delta) * (Bx - Bx_p)
            + lam_pp * delta * (Bx_p - Bx_pp))


def gfrb_adaptive(A, B, x0, x_minus1, delta, state, stop=None):
    """Multi-step reflected splitting with the adaptive step controller.

    Parameters
    ----------
    A : ResolventOperator
        Resolvent of the set-valued part.
    B : ForwardOperator
        Single-valued part; no Lipschitz constant is needed.
    x0, x_minus1 : array
        Seed iterates.  The second history point x_{-2} is seeded to
        x_{-1}, which zeroes the oldest reflection term on the first
        pass.
    delta : float
        Reflection mix-in weight.
    state : StepSizeState
        Adaptive controller; its (c1, c2) box is validated against
        delta before iterating.  lambda_curr seeds lambda_0 and
        lambda_prev seeds lambda_{-1}.
    stop : StopRule

    Returns
    -------
    (x, trace)

    Each pass evaluates B once and the resolvent once; the controller
    sees dx = ||x_{k-1} - x_k|| and dB = ||B x_{k-1} - B x_k|| and
    either shrinks the step or grows it by its summable schedule.
    """
    stop = stop or StopRule()
    validate_coefficients(state.c1, state.c2, delta, state.epsilon)
    x_p = np.asarray(x_minus1, dtype=float).copy()
    x = np.asarray(x0, dtype=float).copy()
    B_p = np.asarray(B(x_p), dtype=float)
    B_pp = B_p
    lam_p = state.lambda_curr
    lam_pp = state.lambda_prev
    trace = IterationTrace()
    t0 = time.perf_counter()
    for k in range(stop.max_iter):
        Bx = np.asarray(B(x), dtype=float)
        dx = float(np.linalg.norm(x_p - x))
        dB = float(np.linalg.norm(B_p - Bx))
        lam = next_step(state, dx, dB)
        target = _reflected_target(x, Bx, B_p, B_pp, lam, lam_p, lam_pp, delta)
        x_new = np.asarray(_resolve(A, target, lam), dtype=float)
        err = float(np.linalg.norm(x_new - x))
        trace.append(k, err, lam, time.perf_counter() - t0)
        _check_divergence(err, x_new, trace, "gfrb_adaptive")
        x_p, x = x, x_new
        B_pp, B_p = B_p, Bx
        lam_pp, lam_p = lam_p, lam
        if err <= stop.tol:
            trace.converged = True
            break
    return x, trace


def gfrb_fixed(A, B, x0, x_minus1, x_minus2, lam, delta, stop=None):
    """Multi-step reflected splitting with a constant step.

    Needs lam < 1 / (2 L (1 + |delta|)) for an L-Lipschitz B; a step at
    or beyond that bound raises StepSizeWarning and iterates anyway.
    One B evaluation and one resolvent call per pass after the two seed
    evaluations.
    """
    stop = stop or StopRule()
    _require_positive_step(lam)
    L = _lipschitz_hint(B)
    if L:
        _warn_if_beyond(lam, 1.0 / (2.0 * L * (1.0 + abs(delta))), "gfrb_fixed")
    x_pp = np.asarray(x_minus2, dtype=float).copy()
    x_p = np.asarray(x_minus1, dtype=float).copy()
    x = np.asarray(x0, dtype=float).copy()
    B_pp = np.asarray(B(x_pp), dtype=float)
    B_p = np.asarray(B(x_p), dtype=float)
    trace = IterationTrace()
    t0 = time.perf_counter()
    for k in range(stop.max_iter):
        Bx = np.asarray(B(x), dtype=float)
        target = _reflected_target(x, Bx, B_p, B_pp, lam, lam, lam, delta)
        x_new = np.asarray(_resolve(A, target, lam), dtype=float)
        err = float(np.linalg.norm(x_new - x))
        trace.append(k, err, lam, time.perf_counter() - t0)
        _check_divergence(err, x_new, trace, "gfrb_fixed")
        x_p, x = x, x_new
        B_pp, B_p = B_p, Bx
        if err <= stop.tol:
            trace.converged = True
            break
    return x, trace


def frb(A, B, x0, x_minus1, lam, stop=None):
    """Reflected splitting with one step of operator memory.

    The delta = 0 case of gfrb_fixed (same kernel, so the reduction is
    bitwise); needs lam < 1 / (2 L).
    """
    stop = stop or StopRule()
    _require_positive_step(lam)
    L = _lipschitz_hint(B)
    if L:
        _warn_if_beyond(lam, 1.0 / (2.0 * L), "frb")
    x_p = np.asarray(x_minus1, dtype=float).copy()
    x = np.asarray(x0, dtype=float).copy()
    B_p = np.asarray(B(x_p), dtype=float)
    B_pp = B_p
    trace = IterationTrace()
    t0 = time.perf_counter()
    for k in range(stop.max_iter):
        Bx = np.asarray(B(x), dtype=float)
        target = _reflected_target(x, Bx, B_p, B_pp, lam, lam, lam, 0.0)
        x_new = np.asarray(_resolve(A, target, lam), dtype=float)
        err = float(np.linalg.norm(x_new - x))
        trace.append(k, err, lam, time.perf_counter() - t0)
        _check_divergence(err, x_new, trace, "frb")
        x_p, x = x, x_new
        B_pp, B_p = B_p, Bx
        if err <= stop.tol:
            trace.converged = True
            break
    return x, trace


def fbf(A, B, x0, lam, stop=None):
    """Forward-backward-forward splitting; two B evaluations per pass.

    x_{k+1} = y_k - lam*B(y_k) + lam*B(x_k) with
    y_k = J_{lam A}(x_k - lam*B(x_k)); needs lam < 1/L.
    """
    stop = stop or StopRule()
    _require_positive_step(lam)
    L = _lipschitz_hint(B)
    if L:
        _warn_if_beyond(lam, 1.0 / L, "fbf")
    x = np.asarray(x0, dtype=float).copy()
    trace = IterationTrace()
    t0 = time.perf_counter()
    for k in range(stop.max_iter):
        Bx = np.asarray(B(x), dtype=float)
        y = np.asarray(_resolve(A, x - lam * Bx, lam), dtype=float)
        x_new = y - lam * np.asarray(B(y), dtype=float) + lam * Bx
        err = float(np.linalg.norm(x_new - x))
        trace.append(k, err, lam, time.perf_counter() - t0)
        _check_divergence(err, x_new, trace, "fbf")
        x = x_new
        if err <= stop.tol:
            trace.converged = True
            break
    return x, trace


def rfb(A, B, x0, x_minus1, lam, stop=None):
    """Reflected forward-backward: forward step at y_k = 2 x_k - x_{k-1}.

    One B evaluation per pass; needs lam < (sqrt(2) - 1) / L.
    """
    stop = stop or StopRule()
    _require_positive_step(lam)
    L = _lipschitz_hint(B)
    if L:
        _warn_if_beyond(lam, (np.sqrt(2.0) - 1.0) / L, "rfb")
    x_p = np.asarray(x_minus1, dtype=float).copy()
    x = np.asarray(x0, dtype=float).copy()
    trace = IterationTrace()
    t0 = time.perf_counter()
    for k in range(stop.max_iter):
        y = 2.0 * x - x_p
        x_new = np.asarray(_resolve(A, x - lam * np.asarray(B(y), dtype=float),
                                    lam), dtype=float)
        err = float(np.linalg.norm(x_new - x))
        trace.append(k, err, lam, time.perf_counter() - t0)
        _check_divergence(err, x_new, trace, "rfb")
        x_p, x = x, x_new
        if err <= stop.tol:
            trace.converged = True
            break
    return x, trace


def fb(A, B, x0, lam, stop=None):
    """Plain forward-backward; convergent only for cocoercive B.

    Kept as the baseline that fails on rotation-like monotone problems
    where the reflected variants succeed.
    """
    stop = stop or StopRule()
    _require_positive_step(lam)
    x = np.asarray(x0, dtype=float).copy()
    trace = IterationTrace()
    t0 = time.perf_counter()
    for k in range(stop.max_iter):
        x_new = np.asarray(
            _resolve(A, x - lam * np.asarray(B(x), dtype=float), lam),
            dtype=float)
        err = float(np.linalg.norm(x_new - x))
        trace.append(k, err, lam, time.perf_counter() - t0)
        _check_divergence(err, x_new, trace, "fb")
        x = x_new
        if err <= stop.tol:
            trace.converged = True
            break
    return x, trace

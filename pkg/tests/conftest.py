import numpy as np

from monosplit.operators import ForwardOperator, ResolventOperator


class CallCounter:
    """Wrap a callable and count invocations."""

    def __init__(self, fn):
        self.fn = fn
        self.count = 0

    def __call__(self, *args):
        self.count += 1
        return self.fn(*args)


def counting_forward(fn, lipschitz_hint=None):
    counter = CallCounter(fn)
    return ForwardOperator(counter, lipschitz_hint=lipschitz_hint), counter


class RecordingResolvent(ResolventOperator):
    """Resolvent wrapper that records every output, i.e. every iterate."""

    def __init__(self, inner):
        self.outputs = []

        def resolve(z, lam):
            out = np.asarray(inner(z, lam), dtype=float)
            self.outputs.append(out.copy())
            return out

        super().__init__(resolve)


def random_monotone_affine(gen, dim, scale=1.0):
    """Affine monotone forward map M x + b with exact Lipschitz hint.

    sym(M) is PSD by construction (skew part plus a PSD part).
    """
    W = gen.standard_normal((dim, dim))
    skew = 0.5 * (W - W.T)
    P = gen.standard_normal((dim, dim))
    psd = P @ P.T / dim
    M = scale * (skew + psd)
    b = gen.standard_normal(dim)
    L = float(np.linalg.norm(M, 2))
    return ForwardOperator(lambda x: M @ x + b, lipschitz_hint=L), M, b

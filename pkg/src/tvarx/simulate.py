"""Synthetic time-varying ARX data generation.

The benchmark system is an ARX(n, m) whose output-polynomial coefficients
sweep through a bank of nine stable polynomials (fast variation: the horizon
is split into eight sub-intervals, each blending one bank polynomial into the
next) while the input-polynomial coefficients ramp once between two bank
polynomials (slow variation). Blending uses a raised-cosine ramp, which is
smooth, monotone and endpoint-exact.

The input is unit white Gaussian noise passed through a 10th-order Butterworth
low-pass filter; the output is corrupted by additive white Gaussian noise.

Everything derives deterministically from a single 64-bit seed via four named
sub-streams (bank, input-noise, output-noise, initial-conditions).
"""

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional

import numpy as np
import scipy.signal

from .exceptions import UnstableTrajectoryError
from .model import ModelOrders
from ._validation import as_series

#: Number of sub-intervals the fast-varying coefficients sweep through.
N_SEGMENTS = 8

#: Samples fed through the input filter and discarded before the kept window.
FILTER_WARMUP = 200

_STREAMS = {"bank": 0, "input-noise": 1, "output-noise": 2, "initial-conditions": 3}


def stream_rng(seed, name):
    """Independent deterministic generator for one named sub-stream of a seed."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), _STREAMS[name]]))


# ---------------------------------------------------------------------------
# stable polynomials and the bank


def polynomial_from_roots(roots):
    """Monic coefficient vector [1, a_1 ... a_n] with the given characteristic roots."""
    coeffs = np.atleast_1d(np.poly(np.asarray(roots)))
    return np.real_if_close(coeffs, tol=1e6).astype(float)


def companion_spectral_radius(a_coeffs):
    """Largest root modulus of z^n + a_1 z^{n-1} + ... + a_n."""
    a_coeffs = np.asarray(a_coeffs, dtype=float)
    if a_coeffs.ndim == 1:
        if len(a_coeffs) == 1:
            return 0.0
        return float(np.max(np.abs(np.roots(a_coeffs))))
    # stacked: build companion matrices and take eigenvalues batched
    deg = a_coeffs.shape[-1] - 1
    if deg == 0:
        return np.zeros(a_coeffs.shape[:-1])
    C = np.zeros(a_coeffs.shape[:-1] + (deg, deg))
    C[..., 0, :] = -a_coeffs[..., 1:]
    idx = np.arange(deg - 1)
    C[..., idx + 1, idx] = 1.0
    return np.max(np.abs(np.linalg.eigvals(C)), axis=-1)


def generate_stable_polynomial(degree, max_root_modulus, rng, min_root_modulus=0.0):
    """Random real coefficient vector with all characteristic roots inside a disk.

    Complex roots come in conjugate pairs, so the coefficients are real. The
    returned vector is [1, a_1 ... a_degree].
    """
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    if not (0.0 < max_root_modulus < 1.0):
        raise ValueError(f"max_root_modulus must be in (0, 1), got {max_root_modulus}")
    roots = []
    remaining = degree
    while remaining > 0:
        r = rng.uniform(min_root_modulus, max_root_modulus)
        if remaining >= 2 and rng.random() < 0.5:
            ang = rng.uniform(0.05 * np.pi, 0.95 * np.pi)
            roots.extend([r * np.exp(1j * ang), r * np.exp(-1j * ang)])
            remaining -= 2
        else:
            roots.append(r if rng.random() < 0.5 else -r)
            remaining -= 1
    return polynomial_from_roots(roots)


@dataclass(frozen=True)
class PolynomialBank:
    """The fixed polynomials the time-varying system sweeps through.

    ``a_polys`` rows are monic vectors [1, a_1 ... a_n]; ``b_polys`` rows are
    [b_1 ... b_m]. Every output polynomial must be stable.
    """

    a_polys: np.ndarray
    b_polys: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a_polys", np.atleast_2d(np.asarray(self.a_polys, dtype=float)))
        object.__setattr__(self, "b_polys", np.atleast_2d(np.asarray(self.b_polys, dtype=float)))
        radii = companion_spectral_radius(self.a_polys)
        if np.any(radii >= 1.0):
            raise ValueError("bank contains an unstable output polynomial")

    @property
    def orders(self):
        return ModelOrders(n=self.a_polys.shape[1] - 1, m=self.b_polys.shape[1])


def generate_bank(
    rng,
    n=2,
    m=2,
    n_a=9,
    n_b=2,
    root_bounds=(0.3, 0.9),
    gain_bounds=(0.5, 1.5),
):
    """Draw a random polynomial bank.

    Output polynomials are stable with root moduli inside ``root_bounds``.
    Input polynomials are a random gain times a monic stable tail, so their
    nontrivial roots obey the same bound.
    """
    lo, hi = root_bounds
    a_polys = np.stack(
        [generate_stable_polynomial(n, hi, rng, min_root_modulus=lo) for _ in range(n_a)]
    )
    b_polys = np.empty((n_b, m))
    for k in range(n_b):
        gain = rng.uniform(*gain_bounds)
        if m == 1:
            b_polys[k] = [gain]
        else:
            tail = generate_stable_polynomial(m - 1, hi, rng, min_root_modulus=lo)
            b_polys[k] = gain * tail
    return PolynomialBank(a_polys=a_polys, b_polys=b_polys)


def design_default_bank():
    """Construct the benchmark bank the package ships as an asset.

    The nine output polynomials alternate between low- and high-angle
    resonances (moduli 0.80-0.85), interleaved with two slow-real-pole
    segments (roots 0.9 and 0.85, large DC gain) and one negative-real-pole
    segment, so consecutive segments demand very different forgetting. The
    two input polynomials drift from gain 0.3 to gain 0.15 with a sign flip
    in the second coefficient (slow but substantial change).
    """

    def conj_pair(rho, degrees):
        ang = np.deg2rad(degrees)
        return polynomial_from_roots([rho * np.exp(1j * ang), rho * np.exp(-1j * ang)])

    a_polys = [
        conj_pair(0.85, 12),
        conj_pair(0.80, 80),
        polynomial_from_roots([0.9, 0.85]),
        conj_pair(0.82, 75),
        polynomial_from_roots([-0.85, -0.6]),
        conj_pair(0.80, 85),
        polynomial_from_roots([0.9, 0.85]),
        conj_pair(0.83, 78),
        conj_pair(0.85, 15),
    ]
    b_polys = [0.3 * np.array([1.0, 0.4]), 0.15 * np.array([1.0, -0.3])]
    return PolynomialBank(a_polys=np.stack(a_polys), b_polys=np.stack(b_polys))


@lru_cache(maxsize=1)
def default_bank():
    """The packaged fixed bank (see :func:`design_default_bank`)."""
    text = resources.files("tvarx").joinpath("assets/default_bank.json").read_text()
    data = json.loads(text)
    return PolynomialBank(a_polys=np.asarray(data["a_polys"]), b_polys=np.asarray(data["b_polys"]))


# ---------------------------------------------------------------------------
# coefficient trajectory


@dataclass(frozen=True)
class ArxTrajectory:
    """Ground-truth parameter vectors theta_t for t = 1 ... N, one row per step."""

    theta: np.ndarray
    orders: ModelOrders

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if theta.ndim != 2 or theta.shape[1] != self.orders.p:
            raise ValueError(f"theta must be (N, {self.orders.p}), got {theta.shape}")
        object.__setattr__(self, "theta", theta)

    @property
    def N(self):
        return self.theta.shape[0]

    def a_coeffs(self):
        """Monic output-polynomial rows [1, a_1 ... a_n] per step."""
        n = self.orders.n
        ones = np.ones((self.N, 1))
        return np.hstack([ones, -self.theta[:, :n]])

    def b_coeffs(self):
        return self.theta[:, self.orders.n :]


def raised_cosine_ramp(length):
    """Monotone ramp from exactly 0 to exactly 1 over ``length`` samples."""
    if length < 2:
        raise ValueError("ramp needs at least two samples")
    return 0.5 * (1.0 - np.cos(np.pi * np.arange(length) / (length - 1)))


def schedule_trajectory(bank, N, n_segments=N_SEGMENTS):
    """Blend the bank into per-step coefficients over t = 1 ... N.

    The input-polynomial coefficients ramp once from the first to the second
    bank polynomial. The output-polynomial coefficients sweep segment by
    segment: segment j (length N // n_segments, remainder joining the last)
    ramps from bank polynomial j to j+1. Every blended output polynomial is
    checked for stability.
    """
    if bank.a_polys.shape[0] < n_segments + 1:
        raise ValueError(
            f"bank too small: need {n_segments + 1} output polynomials, "
            f"have {bank.a_polys.shape[0]}"
        )
    if bank.b_polys.shape[0] < 2:
        raise ValueError("bank too small: need 2 input polynomials")
    seg_len = N // n_segments
    if seg_len < 2:
        raise ValueError(f"N={N} too short for {n_segments} segments")

    orders = bank.orders
    alpha = raised_cosine_ramp(N)
    b_traj = (1.0 - alpha)[:, None] * bank.b_polys[0] + alpha[:, None] * bank.b_polys[1]

    a_traj = np.empty((N, orders.n + 1))
    for j in range(n_segments):
        start = j * seg_len
        stop = (j + 1) * seg_len if j < n_segments - 1 else N
        beta = raised_cosine_ramp(stop - start)
        a_traj[start:stop] = (
            (1.0 - beta)[:, None] * bank.a_polys[j] + beta[:, None] * bank.a_polys[j + 1]
        )

    radii = companion_spectral_radius(a_traj)
    if np.any(radii >= 1.0):
        t_bad = int(np.argmax(radii >= 1.0)) + 1
        raise UnstableTrajectoryError(
            f"blended output polynomial unstable at t={t_bad} "
            f"(spectral radius {radii.max():.4f})"
        )

    theta = np.hstack([-a_traj[:, 1:], b_traj])
    return ArxTrajectory(theta=theta, orders=orders)


# ---------------------------------------------------------------------------
# input filter


def butterworth_lowpass(order, cutoff):
    """Digital Butterworth low-pass as second-order sections.

    ``cutoff`` is normalized to the folding (Nyquist) frequency, in (0, 1).
    Designed from the analog prototype via the bilinear transform with
    frequency pre-warping; unit gain at DC.
    """
    if order < 2 or order % 2 != 0:
        raise ValueError(f"order must be a positive even integer, got {order}")
    if not (0.0 < cutoff < 1.0):
        raise ValueError(f"cutoff must lie in (0, 1), got {cutoff}")
    return scipy.signal.butter(order, cutoff, btype="low", output="sos")


def sos_frequency_response(sos, freqs):
    """|H| of a second-order-section cascade at normalized frequencies."""
    w = np.pi * np.asarray(freqs, dtype=float)
    z = np.exp(-1j * w)
    H = np.ones_like(z, dtype=complex)
    for b0, b1, b2, a0, a1, a2 in sos:
        H *= (b0 + b1 * z + b2 * z * z) / (a0 + a1 * z + a2 * z * z)
    return np.abs(H)


def lowpass_filtered_noise(N, order, cutoff, rng, warmup=FILTER_WARMUP):
    """Unit-variance white Gaussian noise through the low-pass, transient discarded."""
    sos = butterworth_lowpass(order, cutoff)
    white = rng.standard_normal(N + warmup)
    return scipy.signal.sosfilt(sos, white)[warmup:]


# ---------------------------------------------------------------------------
# simulation


def simulate_arx(trajectory, u, sigma2, rng, init_rng=None):
    """Run the time-varying ARX recursion and return the output sequence.

    y(t) = phi(t)^T theta_t + e(t) for t > max(n, m), with e ~ N(0, sigma2)
    i.i.d.; the first max(n, m) outputs are standard-normal initial
    conditions drawn from ``init_rng`` (default: ``rng``).
    """
    u = as_series(u, "u")
    N = trajectory.N
    if len(u) != N:
        raise ValueError(f"input length {len(u)} does not match horizon {N}")
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be non-negative, got {sigma2}")
    orders = trajectory.orders
    nm = orders.warmup
    if init_rng is None:
        init_rng = rng
    y = np.empty(N)
    y[:nm] = init_rng.standard_normal(nm)
    noise = np.sqrt(sigma2) * rng.standard_normal(N - nm)
    theta = trajectory.theta
    n, m = orders.n, orders.m
    for k, t in enumerate(range(nm + 1, N + 1)):
        i = t - 1
        phi_y = y[i - n : i][::-1] if n else np.empty(0)
        phi_u = u[i - m : i][::-1] if m else np.empty(0)
        y[i] = phi_y @ theta[i, :n] + phi_u @ theta[i, n:] + noise[k]
    return y


@dataclass(frozen=True)
class Dataset:
    """One simulated record: input, noisy output, the generating trajectory."""

    u: np.ndarray
    y: np.ndarray
    orders: ModelOrders
    trajectory: Optional[ArxTrajectory]
    sigma2: float
    seed: int
    filter_cutoff: float

    def __post_init__(self):
        if self.trajectory is not None and self.trajectory.orders != self.orders:
            raise ValueError("trajectory orders do not match dataset orders")

    @property
    def N(self):
        return len(self.y)


#: Retries when a regenerated bank yields an unstable blended trajectory.
_BANK_RETRIES = 20


def generate_dataset(config, seed):
    """Simulate one dataset, fully determined by (config, seed).

    ``config`` provides orders, horizon, noise variance, input filter and the
    bank source; see :class:`tvarx.config.RunConfig`. The bank is the packaged
    default unless the config requests regeneration, in which case it is drawn
    from the bank sub-stream (retrying on unstable blends).
    """
    seed = int(seed)
    if config.bank == "default":
        trajectory = schedule_trajectory(default_bank(), config.N)
    else:
        bank_rng = stream_rng(seed, "bank")
        trajectory = None
        for _ in range(_BANK_RETRIES):
            bank = generate_bank(bank_rng, n=config.n, m=config.m)
            try:
                trajectory = schedule_trajectory(bank, config.N)
                break
            except UnstableTrajectoryError:
                continue
        if trajectory is None:
            raise UnstableTrajectoryError(
                f"no stable bank found in {_BANK_RETRIES} attempts for seed {seed}"
            )
    u = lowpass_filtered_noise(
        config.N, config.filter_order, config.filter_cutoff, stream_rng(seed, "input-noise")
    )
    y = simulate_arx(
        trajectory,
        u,
        config.sigma2,
        stream_rng(seed, "output-noise"),
        init_rng=stream_rng(seed, "initial-conditions"),
    )
    return Dataset(
        u=u,
        y=y,
        orders=trajectory.orders,
        trajectory=trajectory,
        sigma2=config.sigma2,
        seed=seed,
        filter_cutoff=config.filter_cutoff,
    )


# ---------------------------------------------------------------------------
# dataset file format


_FMT = "%.17g"


def save_dataset(ds, path):
    """Write the self-describing columnar text format (17 significant digits)."""
    orders = ds.orders
    lines = ["# tvarx-dataset v1"]
    lines.append(f"# n = {orders.n}")
    lines.append(f"# m = {orders.m}")
    lines.append(f"# N = {ds.N}")
    lines.append("# sigma2 = " + _FMT % ds.sigma2)
    lines.append(f"# seed = {ds.seed}")
    lines.append("# cutoff = " + _FMT % ds.filter_cutoff)
    cols = ["t", "u", "y"]
    if ds.trajectory is not None:
        cols += [f"theta_{i + 1}" for i in range(orders.p)]
    lines.append("# columns: " + " ".join(cols))
    for i in range(ds.N):
        row = [str(i + 1), _FMT % ds.u[i], _FMT % ds.y[i]]
        if ds.trajectory is not None:
            row += [_FMT % v for v in ds.trajectory.theta[i]]
        lines.append(" ".join(row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_dataset(path):
    """Parse a dataset file written by :func:`save_dataset`."""
    header = {}
    columns = None
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("columns:"):
                    columns = body.split(":", 1)[1].split()
                elif "=" in body:
                    key, val = body.split("=", 1)
                    header[key.strip()] = val.strip()
                continue
            rows.append(line.split())
    if columns is None or not rows:
        raise ValueError(f"{path}: not a dataset file (missing columns header or data)")
    data = np.asarray(rows, dtype=float)
    if data.shape[1] != len(columns):
        raise ValueError(f"{path}: row width {data.shape[1]} does not match header {columns}")
    n, m = int(header["n"]), int(header["m"])
    orders = ModelOrders(n=n, m=m)
    col = {name: k for k, name in enumerate(columns)}
    u = data[:, col["u"]]
    y = data[:, col["y"]]
    theta_cols = [c for c in columns if c.startswith("theta_")]
    trajectory = None
    if theta_cols:
        theta = data[:, [col[c] for c in theta_cols]]
        trajectory = ArxTrajectory(theta=theta, orders=orders)
    return Dataset(
        u=u,
        y=y,
        orders=orders,
        trajectory=trajectory,
        sigma2=float(header["sigma2"]),
        seed=int(header["seed"]),
        filter_cutoff=float(header["cutoff"]),
    )

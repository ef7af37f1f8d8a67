"""Shared builders and independent oracles for the test suite."""

import numpy as np

from peakgain import RationalTransferFunction, StateSpace

# Bundled demo plant: a lightly damped two-pole resonance behind 50 samples of
# dead time. Reference values computed from the closed-form magnitude
# expression at 40-digit precision and frozen here.
DEMO_NUM = (0.0, 5.0, 4.0)
DEMO_DEN = (10.0, -5.0, 6.0)
DEMO_DELAY = 50
DEMO_PEAK_GAIN = 1.9547706345854523
DEMO_PEAK_OMEGA = 1.2077304677574847


def delayed_resonator():
    return RationalTransferFunction(DEMO_NUM, DEMO_DEN, delay=DEMO_DELAY)


def random_stable_statespace(rng, n_max=6):
    """Generic random stable system: scaled dense A, dense B, C, D."""
    n = int(rng.integers(1, n_max + 1))
    A = rng.standard_normal((n, n))
    radius = float(np.max(np.abs(np.linalg.eigvals(A))))
    if radius > 0.0:
        A *= rng.uniform(0.2, 0.9) / radius
    return StateSpace(A, rng.standard_normal(n), rng.standard_normal(n),
                      float(rng.standard_normal()))


def random_dc_dominant_statespace(rng, n_max=5):
    """Random plant whose gain peaks at frequency zero with a positive value.

    Positive real poles with positive residues give |P(e^{jw})| <= P(1) with
    equality only at w = 0, so the top reversed eigenvalue is the simple
    index-0 one and its eigenvector is the constant vector.
    """
    n = int(rng.integers(1, n_max + 1))
    poles = rng.uniform(0.05, 0.9, n)
    residues = rng.uniform(0.2, 2.0, n)
    return StateSpace(np.diag(poles), np.sqrt(residues), np.sqrt(residues),
                      float(rng.uniform(0.0, 1.0)))


def random_stable_tf(rng, max_order=5, max_delay=5):
    """Random stable rational system with a random pure delay."""
    order = int(rng.integers(1, max_order + 1))
    poles = []
    while len(poles) < order:
        if order - len(poles) >= 2 and rng.random() < 0.5:
            r = rng.uniform(0.05, 0.9)
            phi = rng.uniform(0.0, np.pi)
            poles.extend([r * np.exp(1j * phi), r * np.exp(-1j * phi)])
        else:
            poles.append(rng.uniform(-0.9, 0.9))
    den = np.real(np.poly(poles))
    den = den * rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
    num = rng.standard_normal(int(rng.integers(1, order + 2)))
    return RationalTransferFunction(num, den, delay=int(rng.integers(0, max_delay + 1)))


def impulse_by_long_division(tf, count):
    """Impulse response straight from polynomial long division plus the delay."""
    count = int(count)
    rational = max(count - tf.delay, 0)
    num = np.zeros(rational)
    num[: min(len(tf.num), rational)] = tf.num[:rational]
    den = np.zeros(rational)
    den[: min(len(tf.den), rational)] = tf.den[:rational]
    h = np.zeros(rational)
    for k in range(rational):
        acc = num[k]
        for i in range(1, k + 1):
            acc -= den[i] * h[k - i]
        h[k] = acc / den[0]
    return np.concatenate([np.zeros(tf.delay), h])[:count]

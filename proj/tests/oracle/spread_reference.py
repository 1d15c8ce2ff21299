"""Independent reference values for the spread posterior regression tests.

Exact evaluation: for every assignment of infection indicators z the q-integral
against a Beta(alpha, beta) prior is a ratio of Beta functions, so the posterior
quantities are finite sums. Evaluated with mpmath at 50 digits.
"""
import itertools
import mpmath as mp

mp.mp.dps = 50


def exact(pi_t, alpha, beta, people):
    """people: list of (a_n, b_n) likelihood pairs."""
    n = len(people)
    b0 = mp.beta(alpha, beta)
    m0 = (1 - pi_t) * mp.fprod(b for _, b in people)
    mass1 = mp.mpf(0)
    qmass1 = mp.mpf(0)
    zmass = [mp.mpf(0)] * n
    for z in itertools.product([0, 1], repeat=n):
        k = sum(z)
        w = mp.fprod(a if zi else b for zi, (a, b) in zip(z, people))
        term = pi_t * w * mp.beta(alpha + k, beta + n - k) / b0
        mass1 += term
        qmass1 += pi_t * w * mp.beta(alpha + k + 1, beta + n - k) / b0
        for i, zi in enumerate(z):
            if zi:
                zmass[i] += term
    z_total = m0 + mass1
    return {
        "p_T1": mass1 / z_total,
        "q_mean": qmass1 / z_total,
        "z_post": [zm / z_total for zm in zmass],
    }


if __name__ == "__main__":
    s, r = mp.mpf("0.65"), mp.mpf("0.22")
    cases = {
        "two_smell_loss": [(s, r), (s, r)],
        "two_smell_loss_plus_featureless": [(s, r), (s, r), (1, 1)],
        "featureless_only": [(1, 1)],
    }
    for name, people in cases.items():
        res = exact(mp.mpf("0.5"), 1, 9, people)
        print(name)
        print("  p_T1   =", mp.nstr(res["p_T1"], 20))
        print("  q_mean =", mp.nstr(res["q_mean"], 20))
        for i, zp in enumerate(res["z_post"]):
            print(f"  z_post[{i}] =", mp.nstr(zp, 20))

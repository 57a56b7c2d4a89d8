"""Smoke test for the trunclc extension module.

Build and install first:

    pip install ./crates/python

then run `python python/smoke_test.py`.
"""

import math

import trunclc


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok   {what}")


def main():
    check("normal" in trunclc.families(), "built-in families listed")

    norm = trunclc.Distribution("normal", mu=0.0, sigma=1.0)
    check(abs(norm.log_pdf(0.0) + 0.5 * math.log(2 * math.pi)) < 1e-15, "normal log density at 0")

    deep = norm.truncate(38.0)
    batch = deep.sample(10_000, seed=1)
    check(len(batch) == 10_000 and batch.n_imputed == 0, "10^4 clean draws on ]38, inf[")
    check(min(batch.values) > 38.0, "every draw above the bound")
    z = trunclc.z_test_mean(batch, trunclc.truncated_mean_normal(38.0))
    check(abs(z["z"]) < 4.0, f"mean matches the exact truncated mean (Z = {z['z']:.3f})")

    rate = norm.truncate().sample(50_000, seed=2).acceptance_rate
    check(abs(rate - 0.25) < 0.01, f"continuous acceptance rate near 1/4 ({rate:.4f})")

    try:
        norm.truncate(10.0).sample(1, method="its", impute="error")
    except trunclc.TruncationOverflowError:
        check(True, "inverse transform overflows at ]10, inf[")
    else:
        check(False, "inverse transform overflows at ]10, inf[")

    gone = norm.truncate(800.0)
    check(gone.is_degenerate and gone.log_mass == -math.inf, "]800, inf[ is degenerate")
    b = gone.sample(3)
    check(b.values == [800.0] * 3 and all(b.imputed), "degenerate target imputed at the bound")

    pois = trunclc.Distribution("poisson", **{"lambda": 5.0})
    b = pois.truncate(12.0, 14.0).sample(500, seed=3)
    check(set(b.values) <= {13.0, 14.0}, "discrete draws stay in ]12, 14]")

    g = trunclc.Distribution("gamma", alpha=0.5).truncate()
    b = g.sample(20_000, seed=4)
    mean = sum(b.values) / len(b)
    check(abs(mean - 0.5) < 0.03, f"gamma(1/2) mean via the EPD route ({mean:.4f})")

    report = trunclc.scan_safety("normal", [{"mu": 0.0, "sigma": 1.0}], n_probe=200, seed=5)
    row = report.rows[0]
    check(row["eta_prime"] > 30 and row["eta"] < 10, f"scan: eta {row['eta']:.2f}, eta' {row['eta_prime']:.2f}")
    again = trunclc.SafetyReport.from_csv(report.to_csv())
    check(again.to_csv() == report.to_csv(), "report CSV round trip")

    _, p_value, passed = trunclc.memorylessness_check(0.5, 20.0, n=50_000, seed=6)
    check(passed, f"geometric memorylessness (p = {p_value:.3f})")

    try:
        trunclc.Distribution("normal", sigma=-1.0)
    except ValueError:
        check(True, "invalid parameter raises ValueError")

    print("all smoke checks passed")


if __name__ == "__main__":
    main()

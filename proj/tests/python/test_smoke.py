import math
import os
import subprocess

import pytest

import fermichain as fc


def test_version():
    assert isinstance(fc.__version__, str) and fc.__version__


def test_nearest_neighbour_xx():
    p = fc.XYParams(gamma=0.0, lambda_=0.0)
    cov = fc.build_truncation(p, fc.Window(-4, 4))
    assert fc.pauli_expectation("X0 X1", cov).real == pytest.approx(2 / math.pi, abs=1e-8)


def test_symbol_singularity_raises():
    p = fc.XYParams(gamma=0.0, lambda_=0.0)
    with pytest.raises(fc.NumericalError):
        fc.symbol_eval(p, math.pi / 2)


def test_bad_window_raises():
    with pytest.raises(ValueError):
        fc.Window(3, 1)


def test_omega1_singlet_violates_chsh():
    state = fc.make_omega1(4)
    rho = fc.omega1_rdm(state, [-1, 0])
    assert fc.chsh_beta(rho.matrix) == pytest.approx(math.sqrt(2), abs=1e-10)
    assert fc.chsh_beta_direct(rho.matrix) == pytest.approx(math.sqrt(2), abs=1e-8)


def test_entropy_scan_critical_slope():
    p = fc.XYParams(gamma=0.0, lambda_=0.0)
    scan = fc.entropy_scan(p, [4, 8, 16, 32], 128)
    assert scan.slope == pytest.approx(1 / 3, abs=0.03)
    assert all(b > a for a, b in zip(scan.entropy, scan.entropy[1:]))


@pytest.mark.skipif(not os.environ.get("FERMICHAIN_CLI"), reason="CLI not built")
def test_cli_symbol_trace():
    out = subprocess.run(
        [os.environ["FERMICHAIN_CLI"], "symbol", "--gamma", "1", "--lambda", "1", "--grid", "16"],
        check=True, capture_output=True, text=True).stdout
    rows = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert rows[0].split(",")[-1] == "trace"
    assert len(rows) == 17
    for row in rows[1:]:
        assert float(row.split(",")[-1]) == pytest.approx(1.0, abs=1e-12)

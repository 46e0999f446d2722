from rmnml.gaussian import xi
from rmnml.validation import (check_kraft, check_mc_pipeline,
                              check_reparameterization, check_xi)


def test_xi_suite_passes():
    assert check_xi().passed


def test_xi_suite_detects_injected_error():
    broken = lambda dim, sigma: 1.02 * xi(dim, sigma)
    result = check_xi(xi_fn=broken)
    assert not result.passed


def test_kraft_suite_detects_injected_error():
    # an undersized normalization inflates the density: Kraft must fail
    broken = lambda dim, sigma: 0.25 * xi(dim, sigma)
    assert check_kraft().passed
    assert not check_kraft(xi_fn=broken).passed


def test_reparameterization_suite_passes():
    assert check_reparameterization().passed


def test_mc_pipeline_quick_passes():
    assert check_mc_pipeline(quick=True).passed

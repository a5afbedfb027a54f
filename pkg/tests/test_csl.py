import math

import numpy as np
import pytest

from nearwave.constants import AMU
from nearwave.csl import (CslParameters, MassOutOfRangeError, OtimaTemplate,
                          critical_mass, csl_reduction_factor, csl_visibility,
                          exclusion_map, quantum_operating_visibility,
                          write_exclusion_csv)


def test_operating_point_has_contrast():
    assert quantum_operating_visibility(OtimaTemplate()) > 0.3


def test_reduction_monotone_in_mass():
    params = CslParameters(lambda0=1e-11, r_c=1e-7)
    template = OtimaTemplate()
    masses = [1e4, 1e5, 1e6, 1e7]
    factors = [csl_reduction_factor(params, template, m) for m in masses]
    assert all(a > b for a, b in zip(factors, factors[1:]))
    assert 0.0 < factors[-1] < factors[0] <= 1.0


def test_critical_mass_frozen_values():
    # stronger localization is ruled out by lighter clusters
    m_strong = critical_mass(CslParameters(lambda0=1e-12, r_c=1e-7))
    m_weak = critical_mass(CslParameters(lambda0=1e-8, r_c=1e-7))
    assert m_strong / AMU == pytest.approx(8.8e6, rel=0.05)
    assert m_weak < m_strong
    # both land in the cluster regime the pulsed machine can address
    assert 1e4 < m_weak / AMU < m_strong / AMU < 1e10


def test_critical_mass_threshold_definition():
    params = CslParameters(lambda0=1e-10, r_c=1e-7)
    template = OtimaTemplate()
    m = critical_mass(params, template)
    factor = csl_reduction_factor(params, template, m / AMU)
    assert factor == pytest.approx(math.exp(-1.0), rel=0.05)


def test_visibility_with_channel_below_unperturbed():
    template = OtimaTemplate()
    cfg = template.config(1e6)
    bare = quantum_operating_visibility(template)
    perturbed = csl_visibility(cfg, CslParameters(lambda0=1e-9, r_c=1e-7))
    assert perturbed < bare


def test_out_of_range_masses():
    with pytest.raises(MassOutOfRangeError):
        critical_mass(CslParameters(lambda0=1e6, r_c=1e-7))
    with pytest.raises(MassOutOfRangeError):
        critical_mass(CslParameters(lambda0=1e-40, r_c=1e-7))


def test_parameter_guards():
    with pytest.raises(ValueError):
        CslParameters(lambda0=-1.0, r_c=1e-7)
    with pytest.raises(ValueError):
        critical_mass(CslParameters(lambda0=1e-10, r_c=1e-7),
                      reduction_threshold=1.5)


def test_exclusion_map_and_csv(tmp_path):
    lambda0_grid = np.array([1e-12, 1e-10, 1e6])
    r_c_grid = np.array([5e-8, 1e-7])
    emap = exclusion_map(lambda0_grid, r_c_grid)
    assert emap.critical_mass.shape == (3, 2)
    # stronger localization rate -> smaller critical mass, column-wise
    assert np.all(emap.critical_mass[1] < emap.critical_mass[0])
    # unreachable corner is flagged, not silently clamped
    assert np.all(np.isnan(emap.critical_mass[2]))
    path = tmp_path / "map.csv"
    write_exclusion_csv(emap, path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 4
    assert lines[0].split(",")[1] == repr(5e-8)
    back = float(lines[1].split(",")[1])
    assert back == emap.critical_mass[0, 0]
    with pytest.raises(ValueError):
        exclusion_map(np.array([1e-10]), r_c_grid)

import math

import pytest

from limitsetlab import combine as cb
from limitsetlab import groups as gr
from limitsetlab import moebius as mo
from limitsetlab.errors import (
    DisksNotInDomain,
    KleinHypothesisFails,
    NonLoxodromic,
    PoleInsideRegion,
)


def left_group():
    return gr.schottky_group(
        [(mo.RoundDisk.circle(-6, 1.0), mo.RoundDisk.circle(-3, 1.0))],
        labels=["a"])


def right_group():
    return gr.schottky_group(
        [(mo.RoundDisk.circle(3, 1.0), mo.RoundDisk.circle(6, 1.0))],
        labels=["b"])


class TestVerifyKlein:
    def test_far_disks(self):
        f0 = cb.PolyhedronData((mo.RoundDisk.circle(0, 1.0),))
        f1 = cb.PolyhedronData((mo.RoundDisk.circle(10, 1.0),))
        assert cb.verify_klein(f0, f1)

    def test_self_overlap(self):
        f = cb.PolyhedronData((mo.RoundDisk.circle(0, 1.0),))
        assert not cb.verify_klein(f, f)

    def test_symmetry(self):
        f0 = cb.polyhedron_of(left_group())
        f1 = cb.polyhedron_of(right_group())
        assert cb.verify_klein(f0, f1) == cb.verify_klein(f1, f0)

    def test_amalg_conjugated_separation(self):
        # gamma^k images of the right polyhedron stay Klein-combinable
        f0 = cb.polyhedron_of(left_group())
        f1 = cb.polyhedron_of(right_group())
        gamma = mo.loxodromic_with_axis(0.0, 4000.0, 1.0)
        h = mo.identity()
        for _ in range(5):
            h = mo.compose(h, gamma)
            fk = cb.PolyhedronData(tuple(mo.map_disk(h, d)
                                         for d in f1.complement_disks))
            assert cb.verify_klein(f0, fk)


class TestCombine:
    def test_two_rank1_groups(self):
        g0, g1 = left_group(), right_group()
        comb = cb.combine(g0, cb.polyhedron_of(g0), g1, cb.polyhedron_of(g1))
        assert comb.rank == 2
        assert set(comb.labels()) == {"a", "b"}
        assert len(comb.pingpong) == 2

    def test_pingpong_oracle_on_words(self):
        import numpy as np
        from conftest import reduced_words, word_map
        g0, g1 = left_group(), right_group()
        comb = cb.combine(g0, cb.polyhedron_of(g0), g1, cb.polyhedron_of(g1))
        disk_of = {}
        for pp in comb.pingpong:
            disk_of[(pp.label, 1)] = pp.target
            disk_of[(pp.label, -1)] = pp.source
        rng = np.random.default_rng(23)
        base = 0.0 + 9j
        for word in reduced_words(comb.labels(), 4, rng, 100):
            m = word_map(comb, word)
            z = mo.apply(m, base)
            lab, s = word[0]
            assert disk_of[(lab, s)].contains(z)

    def test_trivial_group_unchanged(self):
        g0 = left_group()
        trivial = gr.GroupSpec((), (), frozenset())
        out = cb.combine(g0, cb.polyhedron_of(g0), trivial,
                         cb.PolyhedronData(()))
        assert out is g0

    def test_overlap_rejected(self):
        g0 = left_group()
        f0 = cb.polyhedron_of(g0)
        with pytest.raises(KleinHypothesisFails):
            cb.combine(g0, f0, g0, f0)

    def test_label_collision_relabeled(self):
        g0 = left_group()
        g1 = gr.schottky_group(
            [(mo.RoundDisk.circle(3, 1.0), mo.RoundDisk.circle(6, 1.0))],
            labels=["a"])
        comb = cb.combine(g0, cb.polyhedron_of(g0), g1, cb.polyhedron_of(g1))
        assert set(comb.labels()) == {"a", "a.1"}


class TestPattersonRatio:
    def test_identity_sup_is_one(self):
        f0 = cb.polyhedron_of(left_group())
        f1 = cb.polyhedron_of(right_group())
        sup, dist, ratio = cb.patterson_ratio(f0, f1, mo.identity())
        assert sup == pytest.approx(1.0)
        assert dist > 0
        assert ratio == pytest.approx(1.0 / dist)

    def test_monotone_decreasing_in_k(self):
        f0 = cb.polyhedron_of(left_group())
        f1 = cb.polyhedron_of(right_group())
        gamma = mo.loxodromic_with_axis(0.0, 4000.0, 1.0)
        h = mo.identity()
        prev = None
        for _ in range(10):
            h = mo.compose(h, gamma)
            _, _, ratio = cb.patterson_ratio(f0, f1, h)
            if prev is not None:
                assert ratio < prev
            prev = ratio

    def test_bookkeeping_identity(self):
        f0 = cb.polyhedron_of(left_group())
        f1 = cb.polyhedron_of(right_group())
        gamma = mo.loxodromic_with_axis(0.0, 4000.0, 1.0)
        sup, dist, ratio = cb.patterson_ratio(f0, f1, gamma)
        assert ratio * dist == pytest.approx(sup, rel=1e-12)

    def test_pole_inside_region_rejected(self):
        f0 = cb.polyhedron_of(left_group())
        f1 = cb.polyhedron_of(right_group())
        # pole of h at 5 lies in the disk around 6
        h = mo.MoebiusMap(1, 0, 1, -5)
        with pytest.raises(PoleInsideRegion):
            cb.patterson_ratio(f0, f1, h)

    def test_golden_value_k3(self):
        # self-oracle pinned after the first verified run
        f0 = cb.polyhedron_of(left_group())
        f1 = cb.polyhedron_of(right_group())
        gamma = mo.loxodromic_with_axis(0.0, 4000.0, 1.0)
        h = mo.compose(mo.compose(gamma, gamma), gamma)
        sup, dist, ratio = cb.patterson_ratio(f0, f1, h)
        assert ratio == pytest.approx(2.9981e-02, rel=1e-3)


class TestPullApartAmalgam:
    def test_k1_valid_combination(self):
        tr = cb.pull_apart_amalgam(left_group(), right_group(), 0.0, 400.0, 1)
        assert tr.combined.rank == 2
        assert tr.set_distance > 0

    def test_ratio_sequence_decreasing(self):
        prev = None
        for k in range(1, 13):
            tr = cb.pull_apart_amalgam(left_group(), right_group(),
                                       0.0, 400.0, k)
            if prev is not None:
                assert tr.ratio < prev
            prev = tr.ratio
        assert prev < 0.01  # heading to zero

    def test_conjugation_preserves_translation_lengths(self):
        g1 = right_group()
        ell = mo.translation_length(g1.generator("b"))
        tr = cb.pull_apart_amalgam(left_group(), g1, 0.0, 400.0, 3)
        conj = tr.combined.generator("b")
        assert mo.translation_length(conj) == pytest.approx(ell, abs=1e-9)

    def test_halfspace_nesting(self):
        # gamma^k(H0) ⊂ gamma(H0) ⊂ H0 via disk containment
        d0 = mo.RoundDisk.circle(0, 1.0)
        gamma = mo.loxodromic_with_axis(0.0, 400.0, 1.0)
        img1 = mo.map_disk(gamma, d0)
        assert abs(img1.center - d0.center) + img1.radius < d0.radius
        h = gamma
        for _ in range(4):
            h = mo.compose(h, gamma)
            imgk = mo.map_disk(h, d0)
            assert abs(imgk.center - img1.center) + imgk.radius < img1.radius

    def test_k0_rejected(self):
        with pytest.raises(ValueError):
            cb.pull_apart_amalgam(left_group(), right_group(), 0.0, 400.0, 0)


class TestPullApartHnn:
    def pairing(self):
        return gr.pairing_map(mo.RoundDisk.circle(3, 1.0),
                              mo.RoundDisk.circle(6, 1.0))

    def test_rank2_free_group(self):
        tr = cb.pull_apart_hnn(left_group(), self.pairing(), 1)
        assert tr.combined.rank == 2
        assert len(tr.combined.pingpong) == 2

    def test_distance_bounded_below_by_delta(self):
        g0 = left_group()
        f0 = cb.polyhedron_of(g0)
        gamma = self.pairing()
        h0 = mo.HalfSpace(gr.isometric_disk(gamma))
        h1 = mo.HalfSpace(gr.isometric_disk(gamma.inverse()))
        delta = mo.euclidean_set_distance(f0.halfspaces(), [h0, h1])
        assert delta > 0
        for k in (1, 2, 3, 5):
            tr = cb.pull_apart_hnn(g0, gamma, k)
            assert tr.set_distance >= delta - 1e-6

    def test_k0_rejected(self):
        with pytest.raises(ValueError):
            cb.pull_apart_hnn(left_group(), self.pairing(), 0)

    def test_elliptic_rejected(self):
        rot = mo.MoebiusMap(math.cos(0.3), -math.sin(0.3),
                            math.sin(0.3), math.cos(0.3))
        with pytest.raises(NonLoxodromic):
            cb.pull_apart_hnn(left_group(), rot, 1)

    def test_disks_in_domain_required(self):
        # pairing disks overlapping g0's own disks are rejected
        gamma = gr.pairing_map(mo.RoundDisk.circle(-6, 1.0),
                               mo.RoundDisk.circle(-3, 1.0))
        with pytest.raises(DisksNotInDomain):
            cb.pull_apart_hnn(left_group(), gamma, 1)


class TestPowerSeriesSum:
    def gamma(self, ell=1.0):
        lam = math.exp(ell / 2)
        return mo.MoebiusMap(lam, 0, 0, 1 / lam)

    def test_decreasing_in_k(self):
        w = mo.UpperHalfSpacePoint(1, 1.0)
        g = self.gamma()
        s1 = cb.power_series_sum(g, w, 1.0, 1)
        s2 = cb.power_series_sum(g, w, 1.0, 2)
        assert s2 < s1

    def test_geometric_closed_form(self):
        w = mo.UpperHalfSpacePoint(1, 1.0)
        for ell in (0.5, 1.0):
            for s in (0.7, 1.0, 2.0):
                for k in (1, 2, 3):
                    got = cb.power_series_sum(self.gamma(ell), w, s, k)
                    q = math.exp(-s * k * ell)
                    assert got == pytest.approx(2 * q / (1 - q), rel=1e-9)

    def test_monotone_in_s(self):
        w = mo.UpperHalfSpacePoint(1, 1.0)
        g = self.gamma()
        prev = None
        for s in (0.5, 1.0, 2.0, 4.0, 8.0):
            val = cb.power_series_sum(g, w, s, 1)
            if prev is not None:
                assert val < prev
            prev = val

    def test_grid_monotonicity(self):
        w = mo.UpperHalfSpacePoint(1, 1.0)
        g = self.gamma()
        svals = [0.5, 0.8, 1.0, 1.5, 2.0]
        kvals = [1, 2, 3, 4, 5]
        table = {(s, k): cb.power_series_sum(g, w, s, k)
                 for s in svals for k in kvals}
        for s in svals:
            for k1, k2 in zip(kvals, kvals[1:]):
                assert table[(s, k2)] < table[(s, k1)]
        for k in kvals:
            for s1, s2 in zip(svals, svals[1:]):
                assert table[(s2, k)] < table[(s1, k)]

    def test_parabolic_rejected(self):
        with pytest.raises(NonLoxodromic):
            cb.power_series_sum(mo.translation(1),
                                mo.UpperHalfSpacePoint(1, 1.0), 1.0, 1)

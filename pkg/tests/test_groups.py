import math

import numpy as np
import pytest

from conftest import reduced_words, word_map
from limitsetlab import groups as gr
from limitsetlab import moebius as mo
from limitsetlab.errors import EllipticGenerator, OverlappingDisks


class TestCyclicGroup:
    def test_conjugated_diagonal_has_pingpong(self):
        f = mo.MoebiusMap(10, 0, 0, 0.1)
        c = mo.MoebiusMap(1, 0, 1, 1)
        fc = mo.compose(c, mo.compose(f, c.inverse()))
        g = gr.cyclic_group(fc)
        (pp,) = g.pingpong
        # isometric circle radius is 1/|c|
        assert pp.source.radius == pytest.approx(1 / abs(fc.c))
        # the generator carries the exterior of the source onto the target side
        image = mo.map_disk(fc, pp.source.complement())
        assert abs(image.center - pp.target.center) < 1e-9
        assert image.radius == pytest.approx(pp.target.radius)

    def test_parabolic_case(self):
        g = gr.cyclic_group(mo.translation(1), label="p")
        assert g.pingpong == ()
        assert g.parabolic_labels == {"p"}

    def test_elliptic_rejected(self):
        t = math.pi / 5
        f = mo.MoebiusMap(math.cos(t), -math.sin(t), math.sin(t), math.cos(t))
        with pytest.raises(EllipticGenerator):
            gr.cyclic_group(f)

    def test_overlapping_isometric_disks_omitted(self):
        # screw motion with |tr| < 2: isometric disks overlap
        f = mo.loxodromic_with_axis(0, 1, 0.05, 3.0)
        g = gr.cyclic_group(f)
        assert g.pingpong == ()


class TestSchottkyGroup:
    def setup_method(self):
        self.pairs = [
            (mo.RoundDisk.circle(-1, 0.25), mo.RoundDisk.circle(1, 0.25)),
            (mo.RoundDisk.circle(-1j, 0.25), mo.RoundDisk.circle(1j, 0.25)),
        ]

    def test_rank_one_limit_structure(self):
        g = gr.schottky_group(self.pairs[:1])
        gen = g.generator("a")
        assert mo.classify(gen) == mo.LOXODROMIC
        att, rep = mo.fixed_points(gen)
        # fixed points sit inside the paired disks
        assert abs(att - 1) < 0.25
        assert abs(rep + 1) < 0.25

    def test_pingpong_oracle_on_random_words(self):
        g = gr.schottky_group(self.pairs)
        rng = np.random.default_rng(7)
        base = 4.0 + 0j  # outside every disk
        disk_of = {}
        for pp in g.pingpong:
            disk_of[(pp.label, 1)] = pp.target
            disk_of[(pp.label, -1)] = pp.source
        for word in reduced_words(g.labels(), 4, rng, 100):
            m = word_map(g, word)
            z = mo.apply(m, base)
            lab, s = word[0]
            assert disk_of[(lab, s)].contains(z), (word, z)

    def test_free_group_witness(self):
        g = gr.schottky_group(self.pairs)
        rng = np.random.default_rng(11)
        for word in reduced_words(g.labels(), 6, rng, 200):
            m = word_map(g, word)
            assert m.distance_to(mo.identity()) > 1e-6

    def test_tangent_disks_rejected(self):
        pairs = [(mo.RoundDisk.circle(-1, 1.0), mo.RoundDisk.circle(1, 1.0))]
        with pytest.raises(OverlappingDisks):
            gr.schottky_group(pairs)

    def test_disk_relation_validated(self):
        g = gr.schottky_group(self.pairs)
        for pp in g.pingpong:
            gen = g.generator(pp.label)
            image = mo.map_disk(gen, pp.source.complement())
            assert abs(image.center - pp.target.center) < 1e-9
            assert abs(image.radius - pp.target.radius) < 1e-9


class TestFuchsianOneHoledTorus:
    @pytest.mark.parametrize("ell", [0.1, 0.5, 1.0, 2.0])
    def test_boundary_length(self, ell):
        g = gr.fuchsian_one_holed_torus(gr.SurfaceGroupParams(ell))
        delta = gr._commutator(g.generator("a"), g.generator("b"))
        assert mo.classify(delta) == mo.LOXODROMIC
        assert mo.translation_length(delta) == pytest.approx(ell, abs=1e-6)

    def test_real_entries_preserve_real_line(self):
        g = gr.fuchsian_one_holed_torus(gr.SurfaceGroupParams(1.0))
        for _, gen in g.generators:
            for z in (0.3, -2.0, 7.5):
                w = mo.apply(gen, z)
                assert not mo.is_infinity(w)
                assert abs(w.imag) < 1e-9

    def test_boundary_axis_normalized(self):
        g = gr.fuchsian_one_holed_torus(gr.SurfaceGroupParams(1.0))
        delta = gr._commutator(g.generator("a"), g.generator("b"))
        fps = mo.fixed_points(delta)
        finite = [p for p in fps if not mo.is_infinity(p)]
        assert any(mo.is_infinity(p) for p in fps)
        assert all(abs(p) < 1e-9 for p in finite)

    def test_other_boundary_lifts_on_positive_reals(self):
        g = gr.fuchsian_one_holed_torus(gr.SurfaceGroupParams(0.5))
        delta = gr._commutator(g.generator("a"), g.generator("b"))
        for lab in ("a", "b"):
            w = g.generator(lab)
            conj = mo.compose(w, mo.compose(delta, w.inverse()))
            for p in mo.fixed_points(conj):
                assert not mo.is_infinity(p)
                assert p.real > 0

    def test_trace_parameter_matches_closed_form(self):
        # independent oracle: 8c^2 - 4c^4 - 2 = -2cosh(l/2) at c^2 = 1+cosh(l/4)
        for ell in (0.25, 1.0, 1.5):
            g = gr.fuchsian_one_holed_torus(gr.SurfaceGroupParams(ell))
            t = g.meta["page"]["trace_param"]
            t_exact = 2 * math.acosh(math.sqrt(1 + math.cosh(ell / 4)))
            assert t == pytest.approx(t_exact, abs=1e-10)


class TestRank2Parabolic:
    def test_basic(self):
        g = gr.rank2_parabolic(1.0, 1.0, 1)
        assert g.generator("u") == mo.translation(1)
        assert g.generator("v") == mo.translation(1j)
        assert g.parabolic_labels == {"u", "v"}

    def test_commuting(self):
        g = gr.rank2_parabolic(0.7, 2.0, 2)
        u, v = g.generator("u"), g.generator("v")
        assert mo.compose(u, v) == mo.compose(v, u)

    def test_lattice_membership(self):
        mu0, d, m = 0.5, 10.0, 3
        g = gr.rank2_parabolic(mu0, d, m)
        rng = np.random.default_rng(3)
        for word in reduced_words(["u", "v"], 6, rng, 20):
            mm = word_map(g, word)
            z = mo.apply(mm, 0)
            assert abs((z.real / mu0) - round(z.real / mu0)) < 1e-9
            assert abs((z.imag / (m * d)) - round(z.imag / (m * d))) < 1e-9


class TestSerialization:
    def test_roundtrip_bit_stable(self):
        g = gr.fuchsian_one_holed_torus(gr.SurfaceGroupParams(1.0))
        text = g.to_json()
        g2 = gr.GroupSpec.from_json(text)
        assert text == g2.to_json()
        for lab in g.labels():
            assert g.generator(lab).distance_to(g2.generator(lab)) == 0.0

    def test_roundtrip_with_disks(self):
        pairs = [(mo.RoundDisk.circle(-1, 0.25), mo.RoundDisk.circle(1, 0.25))]
        g = gr.schottky_group(pairs)
        g2 = gr.GroupSpec.from_json(g.to_json())
        assert g2.pingpong[0].source.radius == 0.25
        assert g.to_json() == g2.to_json()

    def test_pingpong_validation_rejects_wrong_map(self):
        pairs = [(mo.RoundDisk.circle(-1, 0.25), mo.RoundDisk.circle(1, 0.25))]
        g = gr.schottky_group(pairs)
        bad = (("a", mo.translation(1)),)
        with pytest.raises(ValueError):
            gr.GroupSpec(bad, g.pingpong, frozenset())

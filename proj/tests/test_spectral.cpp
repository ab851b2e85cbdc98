#include <doctest.h>

#include "relaxlab/field_io.hpp"
#include "support.hpp"

#include <filesystem>

using namespace relax;
using namespace relax::test;

TEST_CASE("transform round trip and zero field") {
    const Grid2 g = make_grid2(32);
    ScalarField2 zero(g);
    auto c = spectral_transform(zero);
    for (const auto& z : c.c) CHECK(std::abs(z) == 0.0);
    auto back = inverse_transform(c);
    for (double x : back.v) CHECK(x == 0.0);
}

TEST_CASE("single cosine mode transforms to two conjugate coefficients") {
    const Grid2 g = make_grid2(32);
    ScalarField2 f = sample_scalar<2>(g, [](const std::array<double, 2>& x) {
        return std::cos(TWO_PI * x[0]);
    });
    const SpectralCoeffs2 c = spectral_transform(f);
    int nonzero = 0;
    visit_modes<2>(g, [&](std::size_t i, const std::array<int, 2>& j, const std::array<int, 2>&) {
        if (std::abs(c.c[i]) > 1e-12) {
            ++nonzero;
            const int k1 = g.wavenumber(0, j[0]);
            const int k2 = g.wavenumber(1, j[1]);
            CHECK(std::abs(k1) == 1);
            CHECK(k2 == 0);
            CHECK(std::abs(c.c[i]) == doctest::Approx(0.5).epsilon(1e-12));
        }
    });
    CHECK(nonzero == 2);  // k = (1,0) and k = (-1,0) in the stored half-spectrum
    const ScalarField2 back = inverse_transform(c);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(back.v[i] == doctest::Approx(f.v[i]).epsilon(1e-12));
}

TEST_CASE("Parseval against direct grid summation, random field n=64") {
    const Grid2 g = make_grid2(64);
    const ScalarField2 f = random_scalar(g, 7);
    const double grid_l2 = l2_norm_sq(f);
    const double spec_l2 = spectral_norm_sq(spectral_transform(f));
    CHECK(spec_l2 == doctest::Approx(grid_l2).epsilon(1e-12));
}

TEST_CASE("round trip relative error 1e-12 on random data") {
    const Grid2 g = make_grid2(48);
    const ScalarField2 f = random_scalar(g, 21, 12);
    const ScalarField2 back = inverse_transform(spectral_transform(f));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        num = std::max(num, std::abs(back.v[i] - f.v[i]));
        den = std::max(den, std::abs(f.v[i]));
    }
    CHECK(num <= 1e-12 * den);
}

TEST_CASE("non-finite input raises NumericFailure") {
    const Grid2 g = make_grid2(16);
    ScalarField2 f(g);
    f.v[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(spectral_transform(f), NumericFailure);
}

TEST_CASE("grad_perp of sin(2 pi x1)/(2 pi) is (0, -cos(2 pi x1))") {
    const Grid2 g = make_grid2(32);
    const ScalarField2 A = sample_scalar<2>(g, [](const std::array<double, 2>& x) {
        return std::sin(TWO_PI * x[0]) / TWO_PI;
    });
    const VecField2 B = grad_perp(A);
    const VecField2 expect = sample_vector<2>(g, [](const std::array<double, 2>& x) {
        return std::array<double, 2>{0.0, -std::cos(TWO_PI * x[0])};
    });
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < B[0].size(); ++i)
            CHECK(B[c][i] == doctest::Approx(expect[c][i]).epsilon(1e-12));
}

TEST_CASE("div(grad_perp(A)) vanishes and curl2d(grad_perp(A)) = -lap A") {
    const Grid2 g = make_grid2(64);
    const ScalarField2 A = random_scalar(g, 3);
    const VecField2 B = grad_perp(A);
    CHECK(max_spectral_divergence(B) <= 1e-12 * std::max(1.0, max_abs(B)));

    const ScalarField2 curl = curl2d(B);
    const ScalarField2 negLap = laplacian(A);
    for (std::size_t i = 0; i < curl.size(); ++i)
        CHECK(curl.v[i] == doctest::Approx(-negLap.v[i]).epsilon(1e-10));
}

TEST_CASE("laplacian of cos(2 pi x1): analytic value and FD cross-check at n=256") {
    const Grid2 g = make_grid2(256);
    const ScalarField2 f = sample_scalar<2>(g, [](const std::array<double, 2>& x) {
        return std::cos(TWO_PI * x[0]);
    });
    const ScalarField2 lap = laplacian(f);
    // independent oracle: 2nd-order centered finite differences
    const int n = g.n[0];
    const double h = g.h(0);
    double worst_fd = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::size_t c = static_cast<std::size_t>(i) * n;  // x2 = 0 row
        const std::size_t cp = static_cast<std::size_t>((i + 1) % n) * n;
        const std::size_t cm = static_cast<std::size_t>((i - 1 + n) % n) * n;
        const double fd = (f.v[cp] - 2.0 * f.v[c] + f.v[cm]) / (h * h);
        worst_fd = std::max(worst_fd, std::abs(fd - lap.v[c]));
    }
    CHECK(worst_fd < 3e-3);  // FD truncation scale; spectral sits on the analytic value
    for (int i = 0; i < n; ++i) {
        const std::size_t c = static_cast<std::size_t>(i) * n;
        const double exact = -TWO_PI * TWO_PI * f.v[c];
        CHECK(std::abs(lap.v[c] - exact) <= 1e-10 * TWO_PI * TWO_PI);
    }
}

TEST_CASE("Leray projector: fixed point, gradient annihilation, one-mode formula") {
    const Grid2 g = make_grid2(64);

    SUBCASE("divergence-free field unchanged") {
        const VecField2 v = sample_vector<2>(g, [](const std::array<double, 2>& x) {
            return std::array<double, 2>{std::sin(TWO_PI * x[1]), 0.0};
        });
        const VecField2 pv = leray_project(v);
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < v[0].size(); ++i)
                CHECK(pv[c][i] == doctest::Approx(v[c][i]).epsilon(1e-12));
    }

    SUBCASE("gradients project to zero") {
        const ScalarField2 phi = sample_scalar<2>(g, [](const std::array<double, 2>& x) {
            return std::cos(TWO_PI * x[0]);
        });
        const VecField2 gphi = grad(phi);
        const VecField2 p = leray_project(gphi);
        CHECK(max_abs(p) <= 1e-12 * max_abs(gphi));
    }

    SUBCASE("one mode parallel to its wavenumber: (cos 2 pi x1, 0) -> 0") {
        const VecField2 v = sample_vector<2>(g, [](const std::array<double, 2>& x) {
            return std::array<double, 2>{std::cos(TWO_PI * x[0]), 0.0};
        });
        const VecField2 p = leray_project(v);
        CHECK(max_abs(p) <= 1e-12);
    }

    SUBCASE("idempotent, non-expansive, orthogonal on random data") {
        VecField2 v(g);
        v[0] = random_scalar(g, 11, 8);
        v[1] = random_scalar(g, 12, 8);
        const VecField2 p = leray_project(v);
        const VecField2 pp = leray_project(p);
        double diff = 0.0;
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < p[0].size(); ++i)
                diff = std::max(diff, std::abs(pp[c][i] - p[c][i]));
        CHECK(diff <= 1e-12 * std::max(1.0, max_abs(p)));
        CHECK(l2_norm_sq(p) <= l2_norm_sq(v) * (1.0 + 1e-12));
        VecField2 resid = v;
        resid -= p;
        CHECK(std::abs(l2_inner(p, resid)) <= 1e-10 * std::max(1.0, l2_norm_sq(v)));
        CHECK(max_spectral_divergence(p) <= 1e-10 * std::max(1.0, max_abs(p)));
    }

    SUBCASE("mean mode passes through") {
        VecField2 v(g);
        for (std::size_t i = 0; i < v[0].size(); ++i) {
            v[0][i] = 0.7;
            v[1][i] = -0.3;
        }
        const VecField2 p = leray_project(v);
        for (std::size_t i = 0; i < v[0].size(); ++i) {
            CHECK(p[0][i] == doctest::Approx(0.7).epsilon(1e-13));
            CHECK(p[1][i] == doctest::Approx(-0.3).epsilon(1e-13));
        }
    }
}

TEST_CASE("dealias: two-thirds rule") {
    const Grid2 g = make_grid2(64);

    SUBCASE("band-limited field unchanged, idempotent") {
        const ScalarField2 f = random_scalar(g, 5, 10);  // |k| <= 10 < 64/3
        const ScalarField2 d = dealias_field(f);
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(d.v[i] == doctest::Approx(f.v[i]).epsilon(1e-12));
        const ScalarField2 dd = dealias_field(d);
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(dd.v[i] == doctest::Approx(d.v[i]).epsilon(1e-13));
    }

    SUBCASE("mode above the cutoff is zeroed") {
        const int k = g.n[0] / 2 - 1;  // 31 > 64/3
        const ScalarField2 f = sample_scalar<2>(g, [&](const std::array<double, 2>& x) {
            return std::cos(TWO_PI * k * x[0]);
        });
        CHECK(max_abs(dealias_field(f)) <= 1e-12);
    }

    SUBCASE("fine-grid oracle for a dealiased product of |k| = n/4 modes") {
        const int k = g.n[0] / 4;
        auto fa = [&](const std::array<double, 2>& x) { return std::cos(TWO_PI * k * x[0]); };
        auto fb = [&](const std::array<double, 2>& x) {
            return std::sin(TWO_PI * k * x[0] + TWO_PI * k * x[1]);
        };
        ScalarField2 prod(g);
        {
            const ScalarField2 a = sample_scalar<2>(g, fa);
            const ScalarField2 b = sample_scalar<2>(g, fb);
            for (std::size_t i = 0; i < prod.size(); ++i) prod.v[i] = a.v[i] * b.v[i];
        }
        const SpectralCoeffs2 coarse = dealias<2>(spectral_transform(prod));

        const Grid2 gf = make_grid2(2 * g.n[0]);
        ScalarField2 prod_f(gf);
        {
            const ScalarField2 a = sample_scalar<2>(gf, fa);
            const ScalarField2 b = sample_scalar<2>(gf, fb);
            for (std::size_t i = 0; i < prod_f.size(); ++i) prod_f.v[i] = a.v[i] * b.v[i];
        }
        const SpectralCoeffs2 fine = spectral_transform(prod_f);

        visit_modes<2>(g, [&](std::size_t i, const std::array<int, 2>& j, const std::array<int, 2>&) {
            const int k1 = g.wavenumber(0, j[0]);
            const int k2 = g.wavenumber(1, j[1]);
            if (3 * std::abs(k1) > g.n[0] || 3 * std::abs(k2) > g.n[1]) return;
            // same (k1,k2) on the 2x finer grid; k2 >= 0 in both half-spectra
            const std::size_t j1f = static_cast<std::size_t>(k1 >= 0 ? k1 : k1 + gf.n[0]);
            const std::size_t idxf = j1f * (gf.n[1] / 2 + 1) + static_cast<std::size_t>(k2);
            CHECK(std::abs(coarse.c[i] - fine.c[idxf]) <= 1e-12);
        });
    }
}

TEST_CASE("operators are linear: random superposition") {
    const Grid2 g = make_grid2(32);
    const ScalarField2 a = random_scalar(g, 31);
    const ScalarField2 b = random_scalar(g, 32);
    const double ca = 0.37, cb = -1.25;
    ScalarField2 combo(g);
    for (std::size_t i = 0; i < combo.size(); ++i) combo.v[i] = ca * a.v[i] + cb * b.v[i];

    const VecField2 g_combo = grad(combo);
    const VecField2 g_a = grad(a);
    const VecField2 g_b = grad(b);
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < combo.size(); ++i)
            CHECK(g_combo[c][i] ==
                  doctest::Approx(ca * g_a[c][i] + cb * g_b[c][i]).epsilon(1e-11));

    const ScalarField2 l_combo = laplacian(combo);
    const ScalarField2 l_a = laplacian(a);
    const ScalarField2 l_b = laplacian(b);
    for (std::size_t i = 0; i < combo.size(); ++i)
        CHECK(l_combo.v[i] == doctest::Approx(ca * l_a.v[i] + cb * l_b.v[i]).epsilon(1e-10));
}

TEST_CASE("3D curl and divergence basics") {
    const Grid3 g = make_grid3(16);
    const VecField3 u = sample_vector<3>(g, [](const std::array<double, 3>& x) {
        return std::array<double, 3>{std::sin(TWO_PI * x[2]), std::cos(TWO_PI * x[0]),
                                     std::sin(TWO_PI * x[1])};
    });
    CHECK(max_spectral_divergence(u) <= 1e-12 * max_abs(u));
    const VecField3 w = curl3d(u);
    CHECK(max_spectral_divergence(w) <= 1e-10 * std::max(1.0, max_abs(w)));
}

TEST_CASE("stream function inverts grad_perp on mean-zero potentials") {
    const Grid2 g = make_grid2(32);
    const ScalarField2 psi = random_scalar(g, 77);
    const VecField2 v = grad_perp(psi);
    const ScalarField2 back = stream_function(v);
    const double mean = integral(psi);  // random_scalar is mean-zero by construction
    CHECK(std::abs(mean) < 1e-12);
    for (std::size_t i = 0; i < psi.size(); ++i)
        CHECK(back.v[i] == doctest::Approx(psi.v[i]).epsilon(1e-10));
}

TEST_CASE("field snapshot round trip (relaxlab-field-v1)") {
    namespace fs = std::filesystem;
    const Grid2 g = make_grid2(16);
    const VecField2 v = random_divfree(g, 9);
    const std::string dir = (fs::temp_directory_path() / "relaxlab_io_test").string();
    fs::remove_all(dir);
    const std::string sidecar = write_snapshot(dir, to_snapshot(v, "testfield", 0.25));
    const FieldSnapshot snap = read_snapshot(sidecar);
    CHECK(snap.name == "testfield");
    CHECK(snap.time == doctest::Approx(0.25));
    CHECK(snap.components == 2);
    const VecField2 back = vec2_from_snapshot(snap);
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < v[0].size(); ++i) CHECK(back[c][i] == v[c][i]);
    fs::remove_all(dir);
}

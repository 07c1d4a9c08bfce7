#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "zerocurve/lft.hpp"
#include "zerocurve/transfer.hpp"

using namespace zerocurve;

namespace {

GridFunction random_potential(std::mt19937& rng, double x0 = -6.0, double dx = 2e-3,
                              std::size_t n = 6001) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> freq(0.2, 2.0);
    double a1 = amp(rng), a2 = amp(rng), w1 = freq(rng), w2 = freq(rng), p = amp(rng);
    return GridFunction::sample(x0, dx, n, [=](double x) {
        return a1 * std::sin(w1 * x + p) + a2 * std::cos(w2 * x);
    });
}

HamiltonianGrid random_hamiltonian(std::mt19937& rng, double x0 = -6.0,
                                   double dx = 2e-3, std::size_t n = 6001) {
    std::uniform_real_distribution<double> amp(0.1, 0.5);
    double a = amp(rng), b = amp(rng), c = amp(rng);
    return HamiltonianGrid::sample(
        x0, dx, n, [=](double x) { return 1.0 + a * std::sin(x); },
        [=](double x) { return b * std::cos(x); },
        [=](double x) { return 1.5 + c * std::sin(0.7 * x); });
}

} // namespace

TEST_CASE("free Schroedinger transfer: shear at zero energy, rotation at z = 1") {
    auto v = GridFunction::sample(-4.0, 1e-3, 8001, [](double) { return 0.0; });

    Mat2c shear = transfer_schrodinger(v, 0.0, 2.5);
    CHECK(std::abs(shear.a - 1.0) < 1e-10);
    CHECK(std::abs(shear.b - 2.5) < 1e-10);
    CHECK(std::abs(shear.c) < 1e-12);
    CHECK(std::abs(shear.d - 1.0) < 1e-10);

    Mat2c rot = transfer_schrodinger(v, 1.0, M_PI);
    CHECK(std::abs(rot.a + 1.0) < 1e-7);
    CHECK(std::abs(rot.b) < 1e-7);
    CHECK(std::abs(rot.c) < 1e-7);
    CHECK(std::abs(rot.d + 1.0) < 1e-7);

    CHECK_THROWS_AS(transfer_schrodinger(v, 1.0, 10.0), OutOfWindow);
}

TEST_CASE("transfer determinant stays at one for random potentials") {
    std::mt19937 rng(314);
    std::uniform_real_distribution<double> zre(-2.0, 2.0), zim(-1.0, 1.0);
    std::uniform_real_distribution<double> ws(-5.0, 5.0);
    for (int trial = 0; trial < 25; ++trial) {
        auto v = random_potential(rng);
        Complex z{zre(rng), zim(rng)};
        Mat2c t = transfer_schrodinger(v, z, ws(rng));
        CHECK(std::abs(t.det() - 1.0) < 1e-8);
    }
}

TEST_CASE("x-transfer is a cocycle over base-point shifts") {
    std::mt19937 rng(99);
    auto v = random_potential(rng);
    Complex z{0.4, 0.3};
    for (double w1 : {0.7, -1.3, 2.0})
        for (double w2 : {1.1, -0.4}) {
            Mat2c whole = transfer_schrodinger(v, z, w1 + w2);
            Mat2c split = transfer_schrodinger(v, z, w1, w2) *
                          transfer_schrodinger(v, z, w2);
            CHECK(mat_distance(whole, split) < 1e-7);
        }
}

TEST_CASE("canonical transfer: identity Hamiltonian rotates, z = 0 freezes") {
    auto ham = HamiltonianGrid::sample(
        -4.0, 1e-3, 8001, [](double) { return 1.0; }, [](double) { return 0.0; },
        [](double) { return 1.0; });
    double w = 1.7;
    Complex z{0.9, 0.0};
    Mat2c t = transfer_canonical(ham, z, w);
    double zw = 0.9 * w;
    CHECK(std::abs(t.a - std::cos(zw)) < 1e-7);
    CHECK(std::abs(t.b - std::sin(zw)) < 1e-7);
    CHECK(std::abs(t.c + std::sin(zw)) < 1e-7);
    CHECK(std::abs(t.d - std::cos(zw)) < 1e-7);

    Mat2c frozen = transfer_canonical(ham, 0.0, 2.0);
    CHECK(mat_distance(frozen, Mat2c::identity()) < 1e-12);
}

TEST_CASE("canonical transfer determinant for random positive Hamiltonians") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> zre(-2.0, 2.0), zim(-1.0, 1.0);
    std::uniform_real_distribution<double> ws(-5.0, 5.0);
    for (int trial = 0; trial < 25; ++trial) {
        auto ham = random_hamiltonian(rng);
        Complex z{zre(rng), zim(rng)};
        Mat2c t = transfer_canonical(ham, z, ws(rng));
        CHECK(std::abs(t.det() - 1.0) < 1e-8);
    }
}

TEST_CASE("time evolution basics") {
    auto zero = [](double) { return Mat2c{0.0, 0.0, 0.0, 0.0}; };
    CHECK(mat_distance(evolve_time(zero, 3.0), Mat2c::identity()) == 0.0);

    auto nilpotent = [](double) { return Mat2c{0.0, 1.0, 0.0, 0.0}; };
    Mat2c t = evolve_time(nilpotent, 0.8);
    CHECK(std::abs(t.a - 1.0) < 1e-12);
    CHECK(std::abs(t.b - 0.8) < 1e-12);
    CHECK(std::abs(t.c) < 1e-12);

    auto traceful = [](double) { return Mat2c{1.0, 0.0, 0.0, 0.0}; };
    CHECK_THROWS_AS(evolve_time(traceful, 1.0), NonZeroTrace);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> e(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        double a = e(rng), b = e(rng), c = e(rng), w = e(rng);
        auto path = [=](double s) {
            return Mat2c{a * std::cos(w * s), b, c + a * std::sin(s), -a * std::cos(w * s)};
        };
        Mat2c r = evolve_time(path, 1.5);
        CHECK(std::abs(r.det() - 1.0) < 1e-8);
    }
}

TEST_CASE("time cocycle for autonomous generators") {
    Mat2c b{0.3, -0.7, 1.1, -0.3};
    BFamily constant = [&](double, double) { return b; };
    CHECK(cocycle_residual(constant, 0.0, 0.0) == 0.0);
    CHECK(cocycle_residual(constant, 0.9, 0.0) < 1e-9);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ts(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial)
        CHECK(cocycle_residual(constant, ts(rng), ts(rng)) < 1e-7);

    // a family that genuinely depends on the shift still composes
    BFamily shifted = [&](double shift, double t) {
        double s = shift + t;
        return Mat2c{0.2 * std::sin(s), 1.0, 0.3 * std::cos(s), -0.2 * std::sin(s)};
    };
    CHECK(cocycle_residual(shifted, 0.4, 0.6) < 1e-7);
}

TEST_CASE("joint cocycle on a static Hamiltonian") {
    auto ham = HamiltonianGrid::sample(
        -6.0, 1e-3, 12001, [](double) { return 2.0; }, [](double) { return 0.5; },
        [](double) { return 1.0; });
    Complex z{0.8, 0.0};

    // degree-1 style family: B = M(H, z), constant along the static H
    CsBField b_field = [&](double, double) {
        return Mat2c{z * 0.5, z * 1.0, -z * 2.0, -z * 0.5};
    };

    CHECK(joint_cocycle_residual(ham, z, b_field, GroupElement{}, GroupElement{}) == 0.0);
    CHECK(joint_cocycle_residual(ham, z, b_field, GroupElement{0.9, 0.0},
                                 GroupElement{-1.4, 0.0}) < 1e-7);
    CHECK(joint_cocycle_residual(ham, z, b_field, GroupElement{0.7, 0.5},
                                 GroupElement{-0.3, 0.8}) < 1e-7);

    // breaking the zero-curvature relation shows up monotonically
    double previous = 0.0;
    for (double eps : {0.01, 0.03, 0.09}) {
        CsBField broken = [&, eps](double shift, double) {
            return Mat2c{z * 0.5, z * 1.0 + eps * shift, -z * 2.0, -z * 0.5};
        };
        double r = joint_cocycle_residual(ham, z, broken, GroupElement{0.7, 0.5},
                                          GroupElement{-0.3, 0.8});
        CHECK(r > previous);
        previous = r;
    }
    CHECK(previous > 1e-4);
}

TEST_CASE("linear fractional action") {
    Mat2c id = Mat2c::identity();
    RiemannPoint p{Complex{0.3, 0.7}};
    CHECK(chordal_distance(lft_apply(id, p), p) == 0.0);

    Mat2c translate{1.0, 1.0, 0.0, 1.0};
    CHECK(lft_apply(translate, p).value == Complex{1.3, 0.7});

    Mat2c invert{0.0, -1.0, 1.0, 0.0};
    RiemannPoint i_pt{Complex{0.0, 1.0}};
    CHECK(chordal_distance(lft_apply(invert, i_pt), i_pt) < 1e-15);

    // projective completion
    CHECK(lft_apply(invert, RiemannPoint{Complex{0.0, 0.0}}).infinite);
    CHECK(lft_apply(translate, RiemannPoint::inf()).infinite);
    CHECK(lft_apply(invert, RiemannPoint::inf()).value == Complex{0.0, 0.0});

    std::mt19937 rng(23);
    std::uniform_real_distribution<double> e(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        Mat2c t1{Complex{e(rng), e(rng)}, Complex{e(rng), e(rng)},
                 Complex{e(rng), e(rng)}, Complex{e(rng), e(rng)}};
        Mat2c t2{Complex{e(rng), e(rng)}, Complex{e(rng), e(rng)},
                 Complex{e(rng), e(rng)}, Complex{e(rng), e(rng)}};
        RiemannPoint q{Complex{e(rng), e(rng)}};
        double d = chordal_distance(lft_apply(t1 * t2, q),
                                    lft_apply(t1, lft_apply(t2, q)));
        CHECK(d < 1e-10);
    }
}

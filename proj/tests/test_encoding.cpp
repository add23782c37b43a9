#include <doctest.h>

#include "stsfusion/dispersion.hpp"
#include "stsfusion/channel.hpp"
#include "stsfusion/encoding.hpp"

using namespace stsfusion;

namespace {

DecisionVector random_bpsk(int m, Rng& rng) {
    DecisionVector x(m);
    for (int i = 0; i < m; ++i) x[i] = rng.uniform() < 0.5 ? 1.0 : -1.0;
    return x;
}

}  // namespace

TEST_CASE("encode_block scales rows by the decisions") {
    Rng rng(3);
    const auto set = generate_dispersion_set(2, 3, 1, rng);
    const Eigen::MatrixXcd& a = set.matrices[0];

    SUBCASE("all-plus reproduces the matrix") {
        CHECK((encode_block(DecisionVector::Ones(2), a).S - a).norm() == 0.0);
    }
    SUBCASE("all-minus negates it") {
        CHECK((encode_block(-DecisionVector::Ones(2), a).S + a).norm() == 0.0);
    }
    SUBCASE("mixed signs flip individual rows") {
        DecisionVector x(2);
        x << 1.0, -1.0;
        const auto s = encode_block(x, a).S;
        CHECK((s.row(0) - a.row(0)).norm() == 0.0);
        CHECK((s.row(1) + a.row(1)).norm() == 0.0);
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(encode_block(DecisionVector::Ones(3), a), DimensionMismatch);
    }
}

TEST_CASE("encoding is an isometry family") {
    // ||vec(S)||^2 = sum_m ||a_m||^2 regardless of the decisions
    Rng rng(11);
    const auto set = generate_dispersion_set(4, 6, 1, rng);
    const double energy = set.matrices[0].squaredNorm();
    for (int i = 0; i < 50; ++i) {
        const auto s = encode_block(random_bpsk(4, rng), set.matrices[0]).S;
        CHECK(vec(s).squaredNorm() == doctest::Approx(energy).epsilon(1e-12));
    }
}

TEST_CASE("baseline encoding is the identity on the decision vector") {
    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const auto x = random_bpsk(5, rng);
        const auto block = baseline_encode(x);
        REQUIRE(block.S.cols() == 1);
        CHECK((vec(block.S) - x.cast<std::complex<double>>()).norm() == 0.0);
    }
}

TEST_CASE("linearize_received matches the Kronecker identity") {
    SUBCASE("T = 1 collapses to the plain channel") {
        Rng rng(8);
        const auto g = draw_fading(4, 3, rng);
        const Eigen::MatrixXcd y = draw_fading(4, 1, rng);
        const auto model = linearize_received(y, g);
        CHECK((model.g_kron - g).norm() == 0.0);
        CHECK((model.y - y.col(0)).norm() == 0.0);
    }
    SUBCASE("identity channel passes vec(S) through") {
        Rng rng(9);
        const Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(3, 3);
        const Eigen::MatrixXcd s = draw_fading(3, 5, rng);
        const auto model = linearize_received(s, g);
        CHECK((model.g_kron * vec(s) - vec(s)).norm() < 1e-14);
    }
    SUBCASE("random N=4, M=3, T=5") {
        Rng rng(10);
        const auto g = draw_fading(4, 3, rng);
        const auto s = draw_fading(3, 5, rng);
        const Eigen::MatrixXcd y = g * s;
        const auto model = linearize_received(y, g);
        CHECK((model.g_kron * vec(s) - vec(g * s)).norm() < 1e-13);
    }
}

TEST_CASE("effective_channel equals the explicit Kronecker route") {
    Rng rng(12);
    const auto g = draw_fading(5, 3, rng);
    const auto set = generate_dispersion_set(3, 4, 1, rng);
    const Eigen::MatrixXcd fast = effective_channel(g, set.matrices[0]);
    const Eigen::MatrixXcd slow =
        kron(Eigen::MatrixXcd::Identity(4, 4), g) * build_effective_map(set.matrices[0]);
    CHECK((fast - slow).norm() < 1e-13);
}

TEST_CASE("linearization equivalence over random systems") {
    // vec(sqrt(rho) G S + W) == sqrt(rho) (I (x) G) map(A) x + vec(W)
    Rng rng(123);
    for (int i = 0; i < 1000; ++i) {
        const int m = 1 + static_cast<int>(rng.below(4));
        const int n = 1 + static_cast<int>(rng.below(4));
        const int t = 1 + static_cast<int>(rng.below(4));
        const auto g = draw_fading(n, m, rng);
        const auto set = generate_dispersion_set(m, t, 1, rng);
        const auto x = random_bpsk(m, rng);
        const auto w = draw_fading(n, t, rng);
        const double rho = 0.25 + rng.uniform();

        const Eigen::MatrixXcd s = encode_block(x, set.matrices[0]).S;
        const Eigen::VectorXcd lhs = vec((std::sqrt(rho) * (g * s) + w).eval());
        const auto model = linearize_received(w, g, set.matrices[0]);
        const Eigen::VectorXcd rhs =
            std::sqrt(rho) * (model.g_kron * (model.a_map * x.cast<std::complex<double>>())) +
            vec(w);
        REQUIRE(lhs.norm() > 0.0);
        CHECK((lhs - rhs).norm() / lhs.norm() < 1e-12);
    }
}

#include <catch_amalgamated.hpp>

#include "loia/channel.hpp"
#include "loia/json_io.hpp"

using namespace loia;

TEST_CASE("siso sampling shapes and structure") {
    const ChannelSet set = sample_siso_extended(3, 1, Seed{7});
    REQUIRE(set.users() == 3);
    REQUIRE(set.dim() == 3);  // M = 2n+1
    REQUIRE(set.structure() == Structure::Diagonal);
    for (int rx = 1; rx <= 3; ++rx)
        for (int tx = 1; tx <= 3; ++tx) {
            const Matrix& h = set.link(rx, tx);
            REQUIRE(h.rows() == 3);
            REQUIRE(h.cols() == 3);
            // off-diagonal exactly zero
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    if (i != j) REQUIRE(h(i, j) == Complex(0, 0));
        }

    REQUIRE(sample_siso_extended(3, 2, Seed{7}).dim() == 5);
}

TEST_CASE("siso sampling rejects bad parameters") {
    REQUIRE_THROWS_AS(sample_siso_extended(3, 0, Seed{1}), ParameterError);
    REQUIRE_THROWS_AS(sample_siso_extended(4, 1, Seed{1}), ParameterError);
}

TEST_CASE("mimo sampling shapes and parameter checks") {
    const ChannelSet set = sample_mimo(3, 2, Seed{3});
    REQUIRE(set.dim() == 2);
    REQUIRE(set.structure() == Structure::Dense);
    REQUIRE(sample_mimo(3, 4, Seed{3}).dim() == 4);
    REQUIRE_THROWS_AS(sample_mimo(3, 3, Seed{3}), ParameterError);  // odd M out of scope
    REQUIRE_THROWS_AS(sample_mimo(2, 2, Seed{3}), ParameterError);
}

TEST_CASE("sampling is deterministic under the seed") {
    const ChannelSet a = sample_mimo(3, 4, Seed{42});
    const ChannelSet b = sample_mimo(3, 4, Seed{42});
    const ChannelSet c = sample_mimo(3, 4, Seed{43});
    for (int rx = 1; rx <= 3; ++rx)
        for (int tx = 1; tx <= 3; ++tx) REQUIRE(a.link(rx, tx) == b.link(rx, tx));
    REQUIRE(a.link(1, 1) != c.link(1, 1));
}

TEST_CASE("sampled links are well conditioned") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const ChannelSet set = sample_mimo(3, 4, Seed{s});
        for (int rx = 1; rx <= 3; ++rx)
            for (int tx = 1; tx <= 3; ++tx) REQUIRE(condition_number(set.link(rx, tx)) <= 1e8);
        const ChannelSet ds = sample_siso_extended(3, 2, Seed{s});
        for (int rx = 1; rx <= 3; ++rx)
            for (int tx = 1; tx <= 3; ++tx)
                for (int i = 0; i < ds.dim(); ++i)
                    REQUIRE(std::abs(ds.link(rx, tx)(i, i)) >= 1e-6);
    }
}

TEST_CASE("siso diagonal entries are pairwise distinct") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const ChannelSet set = sample_siso_extended(3, 3, Seed{s});
        for (int rx = 1; rx <= 3; ++rx)
            for (int tx = 1; tx <= 3; ++tx)
                for (int i = 0; i < set.dim(); ++i)
                    for (int j = i + 1; j < set.dim(); ++j)
                        REQUIRE(std::abs(set.link(rx, tx)(i, i) - set.link(rx, tx)(j, j)) > 1e-9);
    }
}

TEST_CASE("reciprocal reverses links with conjugate transpose") {
    // 1x1 link: reverse gain is the conjugate
    ChannelSet one(3, 1, Structure::Dense, Seed{0});
    for (int rx = 1; rx <= 3; ++rx)
        for (int tx = 1; tx <= 3; ++tx) {
            Matrix m(1, 1);
            m(0, 0) = Complex(rx, tx);
            one.set_link(rx, tx, m);
        }
    const ChannelSet rev = reciprocal(one);
    REQUIRE(rev.link(2, 1)(0, 0) == std::conj(one.link(1, 2)(0, 0)));

    const ChannelSet set = sample_mimo(3, 4, Seed{9});
    const ChannelSet back = reciprocal(reciprocal(set));
    for (int rx = 1; rx <= 3; ++rx)
        for (int tx = 1; tx <= 3; ++tx) {
            REQUIRE(back.link(rx, tx) == set.link(rx, tx));  // involution, bit-exact
            REQUIRE(reciprocal(set).link(tx, rx) == Matrix(set.link(rx, tx).adjoint()));
        }

    // diagonal structure preserved with conjugated entries
    const ChannelSet ds = sample_siso_extended(3, 1, Seed{5});
    const ChannelSet dr = reciprocal(ds);
    REQUIRE(dr.structure() == Structure::Diagonal);
    REQUIRE(dr.link(2, 1)(0, 0) == std::conj(ds.link(1, 2)(0, 0)));
}

TEST_CASE("channel set json round trip") {
    const ChannelSet set = sample_siso_extended(3, 2, Seed{11});
    const ChannelSet back = channel_set_from_json(channel_set_to_json(set));
    REQUIRE(back.users() == set.users());
    REQUIRE(back.dim() == set.dim());
    REQUIRE(back.structure() == set.structure());
    REQUIRE(back.seed().value == set.seed().value);
    for (int rx = 1; rx <= 3; ++rx)
        for (int tx = 1; tx <= 3; ++tx) REQUIRE(back.link(rx, tx) == set.link(rx, tx));
}

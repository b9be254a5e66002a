#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "homeokit/cmm.hpp"
#include "homeokit/errors.hpp"
#include "homeokit/random.hpp"

using namespace homeokit;

namespace {

BitVector random_bits(Rng& rng, std::size_t n) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i, rng.uniform() < 0.4);
    return v;
}

}  // namespace

TEST_CASE("new matrices are zero-filled") {
    const auto m = new_cmm(2, 3);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.to_rows() == std::vector<std::vector<int>>{{0, 0, 0}, {0, 0, 0}});
    CHECK(m.trained_pairs() == 0);
    CHECK(new_cmm(1, 1).to_rows() == std::vector<std::vector<int>>{{0}});
    CHECK(new_cmm(3, 2).to_rows() == std::vector<std::vector<int>>{{0, 0}, {0, 0}, {0, 0}});
}

TEST_CASE("zero dimensions are rejected") {
    CHECK_THROWS_AS(new_cmm(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(new_cmm(2, 0), std::invalid_argument);
}

TEST_CASE("bit vectors hold only 0 and 1") {
    CHECK_THROWS_AS(BitVector({0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(BitVector(std::vector<int>{-1}), std::invalid_argument);
    const BitVector v{1, 0, 1};
    CHECK(v.size() == 3);
    CHECK(v.popcount() == 2);
    CHECK_FALSE(v.none());
}

TEST_CASE("training stores coincident ones") {
    const auto m = train(new_cmm(2, 3), {1, 0}, {0, 0, 1});
    CHECK(m.to_rows() == std::vector<std::vector<int>>{{0, 0, 1}, {0, 0, 0}});
    CHECK(m.trained_pairs() == 1);

    const auto unchanged = train(m, {0, 0}, {1, 1, 1});
    CHECK(unchanged == m);

    CHECK(train(m, {1, 0}, {0, 0, 1}) == m);
}

TEST_CASE("training with mismatched lengths throws a dimension error") {
    auto m = new_cmm(2, 3);
    CHECK_THROWS_AS(m.train({1, 0, 0}, {0, 0, 1}), DimensionError);
    CHECK_THROWS_AS(m.train({1, 0}, {0, 1}), DimensionError);
    CHECK_THROWS_AS((void)m.recall({1}), DimensionError);
}

TEST_CASE("Willshaw recall") {
    const auto blue = CorrelationMatrix::from_rows({{0, 0, 1}, {0, 0, 0}});
    CHECK(recall(blue, {1, 0}) == BitVector{0, 0, 1});

    const auto two_lamps = CorrelationMatrix::from_rows({{0, 0, 1}, {1, 0, 0}});
    CHECK(recall(two_lamps, {0, 1}) == BitVector{1, 0, 0});
    CHECK(recall(two_lamps, {1, 1}) == BitVector{0, 0, 0});
    CHECK(recall(two_lamps, {0, 0}) == BitVector{0, 0, 0});

    const auto empty = new_cmm(2, 3);
    for (const BitVector& in : {BitVector{0, 0}, BitVector{1, 0}, BitVector{0, 1}, BitVector{1, 1}})
        CHECK(recall(empty, in).none());
}

TEST_CASE("property: weights never clear under training") {
    Rng rng(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = new_cmm(4, 5);
        for (int step = 0; step < 20; ++step) {
            const auto before = m.to_rows();
            m.train(random_bits(rng, 4), random_bits(rng, 5));
            const auto after = m.to_rows();
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 5; ++j) REQUIRE(after[i][j] >= before[i][j]);
        }
    }
}

TEST_CASE("property: disjoint one-hot pairs are recalled exactly") {
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::mt19937 gen(static_cast<unsigned>(n));
        std::shuffle(perm.begin(), perm.end(), gen);
        auto m = new_cmm(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            BitVector in(n), out(n);
            in.set(k, true);
            out.set(perm[k], true);
            m.train(in, out);
        }
        for (std::size_t k = 0; k < n; ++k) {
            BitVector in(n), out(n);
            in.set(k, true);
            out.set(perm[k], true);
            CHECK(m.recall(in) == out);
        }
    }
}

TEST_CASE("property: training order does not matter") {
    Rng rng(5, 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<BitVector, BitVector>> pairs;
        for (int k = 0; k < 6; ++k) pairs.emplace_back(random_bits(rng, 3), random_bits(rng, 4));
        auto forward = new_cmm(3, 4);
        for (const auto& [i, o] : pairs) forward.train(i, o);
        auto backward = new_cmm(3, 4);
        for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) backward.train(it->first, it->second);
        CHECK(forward == backward);
        for (int probe = 0; probe < 4; ++probe) CHECK(forward.recall(random_bits(rng, 3)).popcount() <= 4);
    }
}

TEST_CASE("json round trip and file errors") {
    const auto m = CorrelationMatrix::from_rows({{0, 0, 1}, {1, 0, 0}});
    const auto j = cmm_to_json(m);
    CHECK(j.at("rows") == 2);
    CHECK(j.at("cols") == 3);
    CHECK(cmm_from_json(j) == m);

    const auto path = std::filesystem::temp_directory_path() / "homeokit_test_cmm.json";
    save_cmm(m, path.string());
    CHECK(load_cmm(path.string()) == m);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_cmm("/nonexistent/dir/cmm.json"), IoError);
    CHECK_THROWS_AS(cmm_from_json(nlohmann::json{{"rows", 2}, {"cols", 3}, {"weights", {{0, 1}}}}), std::invalid_argument);
}

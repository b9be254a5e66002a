#include "homeokit/cmm.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "homeokit/errors.hpp"

namespace homeokit {

namespace {

std::uint8_t checked_bit(int b) {
    if (b != 0 && b != 1) throw std::invalid_argument("bit value must be 0 or 1, got " + std::to_string(b));
    return static_cast<std::uint8_t>(b);
}

}  // namespace

BitVector::BitVector(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) bits_.push_back(checked_bit(b));
}

BitVector::BitVector(const std::vector<int>& bits) {
    bits_.reserve(bits.size());
    for (int b : bits) bits_.push_back(checked_bit(b));
}

std::size_t BitVector::popcount() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

CorrelationMatrix::CorrelationMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("correlation matrix dimensions must be >= 1");
    weights_.assign(rows * cols, 0);
}

void CorrelationMatrix::train(const BitVector& input, const BitVector& output) {
    if (input.size() != rows_ || output.size() != cols_) {
        throw DimensionError("train: expected " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                             " pair, got " + std::to_string(input.size()) + "x" + std::to_string(output.size()));
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        if (!input[i]) continue;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (output[j]) weights_[i * cols_ + j] = 1;
        }
    }
    ++trained_pairs_;
}

BitVector CorrelationMatrix::recall(const BitVector& input) const {
    if (input.size() != rows_) {
        throw DimensionError("recall: expected input of length " + std::to_string(rows_) + ", got " +
                             std::to_string(input.size()));
    }
    BitVector out(cols_);
    const std::size_t threshold = input.popcount();
    if (threshold == 0) return out;
    for (std::size_t j = 0; j < cols_; ++j) {
        std::size_t sum = 0;
        for (std::size_t i = 0; i < rows_; ++i) sum += (input[i] && weights_[i * cols_ + j]) ? 1 : 0;
        out.set(j, sum >= threshold);
    }
    return out;
}

std::vector<std::vector<int>> CorrelationMatrix::to_rows() const {
    std::vector<std::vector<int>> out(rows_, std::vector<int>(cols_, 0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i][j] = weights_[i * cols_ + j];
    return out;
}

CorrelationMatrix CorrelationMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) throw std::invalid_argument("correlation matrix needs at least one row");
    CorrelationMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw DimensionError("ragged correlation matrix rows");
        for (std::size_t j = 0; j < m.cols_; ++j) m.weights_[i * m.cols_ + j] = checked_bit(rows[i][j]);
    }
    return m;
}

CorrelationMatrix new_cmm(std::size_t n_in, std::size_t n_out) { return CorrelationMatrix(n_in, n_out); }

CorrelationMatrix train(CorrelationMatrix m, const BitVector& input, const BitVector& output) {
    m.train(input, output);
    return m;
}

BitVector recall(const CorrelationMatrix& m, const BitVector& input) { return m.recall(input); }

nlohmann::json cmm_to_json(const CorrelationMatrix& m) {
    return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"weights", m.to_rows()}};
}

CorrelationMatrix cmm_from_json(const nlohmann::json& j) {
    try {
        const auto rows = j.at("rows").get<std::size_t>();
        const auto cols = j.at("cols").get<std::size_t>();
        auto m = CorrelationMatrix::from_rows(j.at("weights").get<std::vector<std::vector<int>>>());
        if (m.rows() != rows || m.cols() != cols) throw DimensionError("weights do not match rows/cols");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed correlation matrix JSON: ") + e.what());
    }
}

void save_cmm(const CorrelationMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << cmm_to_json(m).dump() << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

CorrelationMatrix load_cmm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open correlation matrix file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("'" + path + "': " + e.what());
    }
    return cmm_from_json(j);
}

}  // namespace homeokit

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace homeokit {

/// Fixed-length vector of binary values.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size) : bits_(size, 0) {}
    BitVector(std::initializer_list<int> bits);
    explicit BitVector(const std::vector<int>& bits);

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool value) { bits_.at(i) = value ? 1 : 0; }
    std::size_t popcount() const;
    bool none() const { return popcount() == 0; }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Binary correlation matrix memory: rows index input (need) bits, columns
/// index output (colour) bits.
class CorrelationMatrix {
public:
    CorrelationMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool weight(std::size_t row, std::size_t col) const { return weights_.at(row * cols_ + col) != 0; }
    std::size_t trained_pairs() const { return trained_pairs_; }

    /// OR the outer product of input and output into the weights.
    void train(const BitVector& input, const BitVector& output);

    /// Willshaw recall: an output bit fires when its summed weight reaches
    /// the number of set input bits. An all-zero input recalls nothing.
    BitVector recall(const BitVector& input) const;

    std::vector<std::vector<int>> to_rows() const;
    static CorrelationMatrix from_rows(const std::vector<std::vector<int>>& rows);

    friend bool operator==(const CorrelationMatrix& a, const CorrelationMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.weights_ == b.weights_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint8_t> weights_;
    std::size_t trained_pairs_ = 0;
};

CorrelationMatrix new_cmm(std::size_t n_in, std::size_t n_out);
CorrelationMatrix train(CorrelationMatrix m, const BitVector& input, const BitVector& output);
BitVector recall(const CorrelationMatrix& m, const BitVector& input);

/// `{"rows":R,"cols":C,"weights":[[...]]}`
nlohmann::json cmm_to_json(const CorrelationMatrix& m);
CorrelationMatrix cmm_from_json(const nlohmann::json& j);
void save_cmm(const CorrelationMatrix& m, const std::string& path);
CorrelationMatrix load_cmm(const std::string& path);

}  // namespace homeokit

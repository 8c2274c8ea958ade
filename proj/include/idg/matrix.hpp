#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "idg/error.hpp"

namespace idg {

// Binary T x n test-membership matrix. Row l lists the items pooled in
// test l: entry (l, j) == 1 means item j participates in test l.
class PoolingMatrix {
public:
    PoolingMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), bits_(static_cast<std::size_t>(rows) * cols, 0) {
        if (rows < 1 || cols < 1)
            fail(ErrorKind::invalid_input, "pooling matrix dimensions must be positive");
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    std::uint8_t at(int row, int col) const {
        return bits_[static_cast<std::size_t>(row) * cols_ + col];
    }

    void set(int row, int col, bool value) {
        bits_[static_cast<std::size_t>(row) * cols_ + col] = value ? 1 : 0;
    }

    std::span<const std::uint8_t> row(int r) const {
        return {bits_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    std::vector<int> row_members(int r) const {
        std::vector<int> members;
        const auto bits = row(r);
        for (int j = 0; j < cols_; ++j)
            if (bits[j]) members.push_back(j);
        return members;
    }

    bool operator==(const PoolingMatrix& other) const = default;

private:
    int rows_;
    int cols_;
    std::vector<std::uint8_t> bits_;
};

}  // namespace idg

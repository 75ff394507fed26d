#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace fineval {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept
    {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const noexcept
    {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    [[nodiscard]] std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept
    {
        return {data_.data() + r * cols_, cols_};
    }

    [[nodiscard]] std::vector<double> column(std::size_t c) const
    {
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }
    [[nodiscard]] std::vector<double>& data() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Samples x horizon x channels tensor (B x F x C), channel-fastest layout.
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(std::size_t samples, std::size_t horizon, std::size_t channels, double fill = 0.0)
        : b_(samples), f_(horizon), c_(channels), data_(samples * horizon * channels, fill)
    {
    }

    [[nodiscard]] std::size_t samples() const noexcept { return b_; }
    [[nodiscard]] std::size_t horizon() const noexcept { return f_; }
    [[nodiscard]] std::size_t channels() const noexcept { return c_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t b, std::size_t f, std::size_t c) noexcept
    {
        assert(b < b_ && f < f_ && c < c_);
        return data_[(b * f_ + f) * c_ + c];
    }
    double operator()(std::size_t b, std::size_t f, std::size_t c) const noexcept
    {
        assert(b < b_ && f < f_ && c < c_);
        return data_[(b * f_ + f) * c_ + c];
    }

    /// The horizon sequence of one (sample, channel) pair.
    [[nodiscard]] std::vector<double> series(std::size_t b, std::size_t c) const
    {
        std::vector<double> out(f_);
        for (std::size_t f = 0; f < f_; ++f) out[f] = (*this)(b, f, c);
        return out;
    }

    [[nodiscard]] bool same_shape(const Tensor3& o) const noexcept
    {
        return b_ == o.b_ && f_ == o.f_ && c_ == o.c_;
    }

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }
    [[nodiscard]] std::vector<double>& data() noexcept { return data_; }

    friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
    std::size_t b_ = 0;
    std::size_t f_ = 0;
    std::size_t c_ = 0;
    std::vector<double> data_;
};

} // namespace fineval

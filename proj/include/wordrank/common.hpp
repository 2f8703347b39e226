#ifndef WORDRANK_COMMON_HPP
#define WORDRANK_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wordrank {

// Error raised when an input chain (or matrix) violates a structural
// precondition: bad dimensions, non-stochastic rows, recurrent states,
// invalid words, regime mismatches.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Error raised when an iterative numeric procedure fails to reach its
// target tolerance within its iteration budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Error raised when a combinatorial enumeration exceeds its configured cap
// (cycle catalogs, word lists, frontier expansions).
class CapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Error raised on malformed input files or failed writes.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense row-major matrix. Small chains dominate this library's workloads,
// so no sparse storage is attempted.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Tunable tolerances and caps. Defaults are the documented contract; every
// knob is surfaced on the CLI so that knife-edge inputs can be probed with
// looser or tighter settings.
struct AnalysisOptions {
    double row_sum_tol = 1e-12;        // |row sum - 1| allowed in validation
    double beta_tol = 1e-12;           // |r(P(beta)) - 1| required from solve_beta
    double criticality_tol = 1e-9;     // |r_H(beta) - 1| marking a component critical
    double eig_residual_tol = 1e-10;   // max residual of returned eigenvectors
    std::size_t bisection_iterations = 64;
    std::size_t power_iteration_cap = 1000000;
    double tie_band = 1e-12;           // log-space width of an enumeration tie group
    std::uint64_t expansion_cap = 100000000;  // frontier pops before giving up
    std::uint64_t cycle_cap = 1000000;        // simple-cycle catalog size cap
    std::uint64_t word_list_cap = 2000000;    // brute-force / nonrepeating word caps
};

namespace detail {

// Saturating add for path-count dynamic programs whose exact values can
// overflow 64 bits.
inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s < a ? UINT64_MAX : s;
}

}  // namespace detail

}  // namespace wordrank

#endif  // WORDRANK_COMMON_HPP

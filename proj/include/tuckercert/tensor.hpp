#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tuckercert {

using Index = std::int64_t;
// 1-based coordinate (x_1..x_d)
using Coord = std::vector<int>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PatternError : Error {
    enum class Kind { Malformed, OutOfBounds, Duplicate };
    Kind kind;
    PatternError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
};

// an assumption (A_j, A_j^+, B_j) or a precondition does not hold
struct AssumptionError : Error {
    using Error::Error;
};

// a brute-force path would exceed its size guard
struct GuardExceeded : Error {
    using Error::Error;
};

class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<int> dims);

    int order() const { return static_cast<int>(dims_.size()); }
    int dim(int i) const { return dims_.at(i - 1); }   // 1-based mode
    const std::vector<int>& dims() const { return dims_; }

    Index size() const;
    Index size_without(int i) const;   // N_{-i}
    Index head(int j) const;           // N_j = n_1 ... n_j
    Index tail(int j) const;           // n_{j+1} ... n_d

    bool contains(const Coord& x) const;
    void check(const Coord& x) const;

    bool operator==(const Shape& o) const { return dims_ == o.dims_; }

private:
    std::vector<int> dims_;
};

// column of U_(i) holding coord (row is x_i)
Index matricize_col(const Shape& s, int i, const Coord& x);
Coord matricize_coord(const Shape& s, int i, int row, Index col);

// (row, col) of coord in the j-th unfolding
std::pair<Index, Index> unfold_index(const Shape& s, int j, const Coord& x);
Coord unfold_coord(const Shape& s, int j, Index row, Index col);
Index head_row(const Shape& s, int j, const Coord& x);
Index tail_col(const Shape& s, int j, const Coord& x);

// lexicographic order, x_1 most significant
std::vector<Coord> all_coords(const Shape& s);
Index linear_index(const Shape& s, const Coord& x);   // 0-based, first dim fastest

std::string coord_str(const Coord& x);

class SamplingPattern {
public:
    SamplingPattern() = default;
    SamplingPattern(Shape shape, std::vector<Coord> observed);

    const Shape& shape() const { return shape_; }
    const std::vector<Coord>& observed() const { return observed_; }
    std::size_t count() const { return observed_.size(); }
    bool contains(const Coord& x) const;

    static SamplingPattern full(const Shape& s);

    bool operator==(const SamplingPattern& o) const {
        return shape_ == o.shape_ && observed_ == o.observed_;
    }

private:
    Shape shape_;
    std::vector<Coord> observed_;
};

SamplingPattern read_pattern(std::istream& in);
SamplingPattern read_pattern_file(const std::string& path);
void write_pattern(std::ostream& out, const SamplingPattern& p);
std::string pattern_json(const SamplingPattern& p);

}  // namespace tuckercert

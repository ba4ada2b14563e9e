#include "tuckercert/tensor.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tuckercert {

Shape::Shape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw Error("shape needs order >= 2");
    for (int n : dims_)
        if (n < 1) throw Error("shape dims must be positive");
}

Index Shape::size() const {
    Index p = 1;
    for (int n : dims_) p *= n;
    return p;
}

Index Shape::size_without(int i) const { return size() / dim(i); }

Index Shape::head(int j) const {
    Index p = 1;
    for (int k = 0; k < j; ++k) p *= dims_[k];
    return p;
}

Index Shape::tail(int j) const {
    Index p = 1;
    for (int k = j; k < order(); ++k) p *= dims_[k];
    return p;
}

bool Shape::contains(const Coord& x) const {
    if (static_cast<int>(x.size()) != order()) return false;
    for (int k = 0; k < order(); ++k)
        if (x[k] < 1 || x[k] > dims_[k]) return false;
    return true;
}

void Shape::check(const Coord& x) const {
    if (static_cast<int>(x.size()) != order())
        throw PatternError(PatternError::Kind::Malformed, "coordinate " + coord_str(x) + " has wrong order");
    if (!contains(x))
        throw PatternError(PatternError::Kind::OutOfBounds, "coordinate " + coord_str(x) + " out of bounds");
}

Index matricize_col(const Shape& s, int i, const Coord& x) {
    s.check(x);
    if (i < 1 || i > s.order()) throw Error("mode out of range");
    Index col = 1, stride = 1;
    for (int k = 1; k <= s.order(); ++k) {
        if (k == i) continue;
        col += static_cast<Index>(x[k - 1] - 1) * stride;
        stride *= s.dim(k);
    }
    return col;
}

Coord matricize_coord(const Shape& s, int i, int row, Index col) {
    if (i < 1 || i > s.order()) throw Error("mode out of range");
    if (row < 1 || row > s.dim(i) || col < 1 || col > s.size_without(i))
        throw Error("matricization index out of range");
    Coord x(s.order());
    x[i - 1] = row;
    Index rest = col - 1;
    for (int k = 1; k <= s.order(); ++k) {
        if (k == i) continue;
        x[k - 1] = static_cast<int>(rest % s.dim(k)) + 1;
        rest /= s.dim(k);
    }
    return x;
}

static void check_split(const Shape& s, int j) {
    if (j < 1 || j > s.order() - 1) throw Error("split index j out of range");
}

Index head_row(const Shape& s, int j, const Coord& x) {
    Index row = 1, stride = 1;
    for (int k = 0; k < j; ++k) {
        row += static_cast<Index>(x[k] - 1) * stride;
        stride *= s.dims()[k];
    }
    return row;
}

Index tail_col(const Shape& s, int j, const Coord& x) {
    Index col = 1, stride = 1;
    for (int k = j; k < s.order(); ++k) {
        col += static_cast<Index>(x[k] - 1) * stride;
        stride *= s.dims()[k];
    }
    return col;
}

std::pair<Index, Index> unfold_index(const Shape& s, int j, const Coord& x) {
    check_split(s, j);
    s.check(x);
    return {head_row(s, j, x), tail_col(s, j, x)};
}

Coord unfold_coord(const Shape& s, int j, Index row, Index col) {
    check_split(s, j);
    if (row < 1 || row > s.head(j) || col < 1 || col > s.tail(j))
        throw Error("unfolding index out of range");
    Coord x(s.order());
    Index r = row - 1, c = col - 1;
    for (int k = 0; k < j; ++k) {
        x[k] = static_cast<int>(r % s.dims()[k]) + 1;
        r /= s.dims()[k];
    }
    for (int k = j; k < s.order(); ++k) {
        x[k] = static_cast<int>(c % s.dims()[k]) + 1;
        c /= s.dims()[k];
    }
    return x;
}

std::vector<Coord> all_coords(const Shape& s) {
    std::vector<Coord> out;
    out.reserve(static_cast<std::size_t>(s.size()));
    Coord x(s.order(), 1);
    for (;;) {
        out.push_back(x);
        int k = s.order() - 1;
        while (k >= 0 && x[k] == s.dims()[k]) x[k--] = 1;
        if (k < 0) break;
        ++x[k];
    }
    return out;
}

Index linear_index(const Shape& s, const Coord& x) {
    Index idx = 0, stride = 1;
    for (int k = 0; k < s.order(); ++k) {
        idx += static_cast<Index>(x[k] - 1) * stride;
        stride *= s.dims()[k];
    }
    return idx;
}

std::string coord_str(const Coord& x) {
    std::string s = "(";
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(x[k]);
    }
    return s + ")";
}

SamplingPattern::SamplingPattern(Shape shape, std::vector<Coord> observed)
    : shape_(std::move(shape)), observed_(std::move(observed)) {
    for (const auto& x : observed_) shape_.check(x);
    std::sort(observed_.begin(), observed_.end());
    auto dup = std::adjacent_find(observed_.begin(), observed_.end());
    if (dup != observed_.end())
        throw PatternError(PatternError::Kind::Duplicate, "duplicate coordinate " + coord_str(*dup));
}

bool SamplingPattern::contains(const Coord& x) const {
    return std::binary_search(observed_.begin(), observed_.end(), x);
}

SamplingPattern SamplingPattern::full(const Shape& s) { return SamplingPattern(s, all_coords(s)); }

SamplingPattern read_pattern(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw PatternError(PatternError::Kind::Malformed, std::string("pattern parse error: ") + e.what());
    }
    try {
        auto dims = j.at("dims").get<std::vector<int>>();
        auto obs = j.at("observed").get<std::vector<std::vector<int>>>();
        Shape s(dims);
        return SamplingPattern(s, obs);
    } catch (const nlohmann::json::exception& e) {
        throw PatternError(PatternError::Kind::Malformed, std::string("malformed pattern: ") + e.what());
    } catch (const PatternError&) {
        throw;
    } catch (const Error& e) {
        throw PatternError(PatternError::Kind::Malformed, e.what());
    }
}

SamplingPattern read_pattern_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    return read_pattern(f);
}

std::string pattern_json(const SamplingPattern& p) {
    nlohmann::json j;
    j["dims"] = p.shape().dims();
    j["observed"] = p.observed();
    return j.dump();
}

void write_pattern(std::ostream& out, const SamplingPattern& p) { out << pattern_json(p) << "\n"; }

}  // namespace tuckercert

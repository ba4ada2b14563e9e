#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tuckercert/assumptions.hpp"
#include "tuckercert/constraint.hpp"

namespace tuckercert {

Index thm3_upper_bound(const ConstraintMatrix& cm, const std::vector<int>& subset, const RankSpec& rs);

// Sparsity: one tail mode and every support of size r+1, exact by min cuts
enum class SubsetMethod { Auto, Columns, Rows, Sparsity };

inline constexpr int kColumnEnumGuard = 22;
inline constexpr int kRowScanGuard = 22;

struct SubsetCheck {
    bool holds = true;
    std::vector<int> violating;
};

// every subset of columnSet satisfies R*m - g(m) >= t; throws GuardExceeded when neither method fits
SubsetCheck subset_condition_holds(const ConstraintMatrix& cm, const std::vector<int>& column_set, const RankSpec& rs,
                                   SubsetMethod method = SubsetMethod::Auto);
bool thm4_dependent(const ConstraintMatrix& cm, const RankSpec& rs);

// every t'-subset satisfies R*m - g(m) >= R*t' - sumSq*(t'-n0+1)^+
SubsetCheck unique_subset_condition_holds(const ConstraintMatrix& cm, const std::vector<int>& column_set,
                                          const RankSpec& rs, Index n0);

enum class FiniteVerdict { Finite, NotFinite, Undecided };
enum class UniqueVerdict { Unique, NotCertified, Undecided };

const char* to_string(FiniteVerdict v);
const char* to_string(UniqueVerdict v);

struct CertifyOptions {
    std::uint64_t node_budget = 4'000'000;
    const std::vector<Coord>* hint = nullptr;
};

struct Transcript {
    bool Bj = false;
    std::string selection_method;   // "spread", "search", "hint"
    bool Aj_checked = false;
    bool Aj_ok = false;
    std::vector<Coord> selection;
    std::string search_method;      // "rows", "columns", "trivial"
    std::uint64_t nodes = 0;
    std::string note;
};

struct FiniteCertificate {
    FiniteVerdict verdict = FiniteVerdict::Undecided;
    Index n = 0;
    Index num_columns = 0;
    std::vector<int> witness;     // 0-based column indices
    std::vector<int> violating;
    Transcript transcript;
    ConstraintMatrix constraint;
};

struct UniqueCertificate {
    UniqueVerdict verdict = UniqueVerdict::Undecided;
    FiniteCertificate finite;
    Index n0 = 0;
    std::vector<int> witness0;
};

Index unique_n0(const Shape& s, const RankSpec& rs);

FiniteCertificate certify_finite(const SamplingPattern& p, const RankSpec& rs, std::uint64_t seed,
                                 const CertifyOptions& opt = {});
// search for a witness on a given constraint matrix (no assumption checks)
FiniteCertificate search_finite_witness(const ConstraintMatrix& cm, const RankSpec& rs, Index n,
                                        std::uint64_t node_budget);
UniqueCertificate certify_unique(const SamplingPattern& p, const RankSpec& rs, std::uint64_t seed,
                                 const CertifyOptions& opt = {});

// re-checks a witness from scratch by column enumeration (or row scan when large)
bool verify_finite_witness(const ConstraintMatrix& cm, const RankSpec& rs, const std::vector<int>& witness, Index n);

struct SubproResult {
    bool holds = true;
    bool vacuous = false;
    std::string note;
    FiniteVerdict at_j = FiniteVerdict::Undecided, at_j_minus_1 = FiniteVerdict::Undecided;
};

// ranks r_j..r_d; certifies at j and at j-1
SubproResult subpro_consistency(const SamplingPattern& p, int j, const std::vector<int>& ranks_from_j,
                                std::uint64_t seed, const CertifyOptions& opt = {});

std::string certificate_json(const FiniteCertificate& c, const RankSpec& rs);
std::string certificate_json(const UniqueCertificate& c, const RankSpec& rs);

}  // namespace tuckercert

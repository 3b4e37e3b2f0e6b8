#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kreiss/certificates.hpp"

namespace kreiss {

enum class FamilyKind {
    normal_stable,
    random_shifted_stable,
    defective_axis,
    near_defective,
    contraction,
    jordan_parade,
    symbol_sampled,
};

const char* to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& s);

struct FamilySpec {
    FamilyKind kind = FamilyKind::normal_stable;
    int n = 2;
    int count = 1;
    std::uint64_t seed = 1;
    double shift_margin = 0.5; // random-shifted-stable
    double delta = 1.0;        // near-defective: member m has real part -delta/m
    double theta = 0.0;        // near-defective: imaginary part
    int block_size = 2;        // defective-axis, near-defective
    std::string symbol = "constant";
    double xi_min = -1.0;
    double xi_max = 1.0;
    std::string table_path;    // symbol "user-table"

    void validate() const;
};

struct Family {
    std::vector<CMatrix> members;
    std::vector<std::string> labels;
    bool parameterized = false; // members ordered by a family parameter
};

/// Deterministic in (spec, seed).
Family generate_family(const FamilySpec& spec);

// ---------------------------------------------------------------------------
// Symbols A(xi)

using Symbol = std::function<CMatrix(const std::vector<double>& xi)>;
using SymbolFactory = std::function<Symbol(int n)>;

/// Registers a symbol under `id`; later registrations replace earlier ones.
void register_symbol(const std::string& id, SymbolFactory factory);
/// Built-ins: constant, transport, rotation, defective-transport.
Symbol make_symbol(const std::string& id, int n);
std::vector<std::string> registered_symbols();

struct SymbolSample {
    std::vector<double> xi;
    std::optional<CMatrix> matrix;
    std::string error;
};

std::vector<SymbolSample> sample_symbol(const Symbol& symbol, const std::vector<std::vector<double>>& xi_grid);

std::string xi_label(const std::vector<double>& xi);

// ---------------------------------------------------------------------------
// Family reports

enum class Uniformity { uniform, non_uniform, inconclusive };

const char* to_string(Uniformity u);

struct MemberRecord {
    int index = 0;
    std::string label;
    int n = 0;
    SupSearchResult K1; // semigroup (continuous) or power (discrete) supremum
    SupSearchResult K2;
    SupSearchResult calK;
    double K31 = 0.0;
    double K32 = 0.0;
    double certificate_bound = 0.0; // continuous: K31^2 C / 4; discrete: region bound at r = 1
    bool certificate_valid = false;
    bool stable = false;            // quasi-stable / power-bounded classification
    bool failed = false;
    std::string error;
};

struct SideVerdict {
    Uniformity verdict = Uniformity::inconclusive;
    std::optional<int> witness;
    std::vector<double> growth_trace;
};

struct FamilyReport {
    Mode mode = Mode::continuous;
    bool parameterized = false;
    std::vector<MemberRecord> members;
    double sup_K1 = 0.0;
    double sup_K2 = 0.0;
    double sup_calK = 0.0;
    double sup_K31 = 0.0;
    double sup_K32 = 0.0;
    SideVerdict calK_side;
    SideVerdict K1_side;
    Uniformity uniformity = Uniformity::inconclusive;
    int failures = 0;
};

/// Runs the constants and certificate pipeline on every member. Member
/// failures are recorded in-band and never abort the sweep.
FamilyReport family_report(const Family& family, Mode mode, const SearchConfig& cfg = {});

/// Verdict from per-member sup results, as used for both report sides.
/// non-uniform: some member diverged. inconclusive: a member failed, or a
/// parameterized family whose last three values increase strictly and end at
/// least twice the smallest value. uniform: everything finite and the
/// certificates valid.
SideVerdict side_verdict(const std::vector<const SupSearchResult*>& results, const std::vector<bool>& failed,
                         bool parameterized, bool certificates_ok);

} // namespace kreiss

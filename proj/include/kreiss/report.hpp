#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "kreiss/cauchy.hpp"
#include "kreiss/certificates.hpp"
#include "kreiss/families.hpp"

namespace kreiss {

using Json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "kreissometer/1";

std::string sha256_hex(std::string_view bytes);

/// Finite numbers as numbers, infinities as "+inf"/"-inf", NaN as null.
Json number(double v);
Json complex_json(Complex z);
Json matrix_json(const Dense& m);

Json to_json(const SearchConfig& cfg);
Json to_json(const SupSearchResult& r, bool with_trace = true);
Json to_json(const SpectrumReport& sp);
Json to_json(const StabilityVerdict& v);
Json to_json(const Condition3Certificate& c);
Json to_json(const Condition3Verification& v);
Json to_json(const Condition4Certificate& c);
Json to_json(const FamilySpec& spec);
Json to_json(const FamilyReport& rep);

struct AnalyzeOptions {
    Mode mode = Mode::continuous;
    bool certify = false;
    double tol = default_relative_tolerance;
    double eps_scaling = 1.0;
    SearchConfig search;
};

/// The full single-matrix report; `input` is the raw file content hashed into
/// the digest field.
Json analysis_report(const CMatrix& m, std::string_view input, const AnalyzeOptions& opt);

Json family_report_json(const FamilySpec& spec, const FamilyReport& rep, const SearchConfig& cfg);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

} // namespace kreiss

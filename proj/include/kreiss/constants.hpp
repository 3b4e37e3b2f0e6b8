#pragma once

#include "kreiss/resolvent.hpp"
#include "kreiss/search.hpp"
#include "kreiss/spectra.hpp"

namespace kreiss {

enum class Mode { continuous, discrete };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& s);

/// Largest of |exp(M t)| over t in [0, t_max]. A strictly stable matrix is
/// never reported as diverged (the window is extended instead); otherwise
/// growth over the last decade of t or a value above the threshold at t_max
/// counts as divergence.
SupSearchResult sup_semigroup_norm(const CMatrix& m, const SearchConfig& cfg = {});

/// Largest of |M^nu| over nu in [0, nu_max]. Stops exactly once |M^nu| < 1,
/// since every later power is then bounded by an earlier one.
SupSearchResult sup_power_norm(const CMatrix& m, const SearchConfig& cfg = {});

/// sup over Re z > 0 of Re(z) |(zI - M)^-1|.
SupSearchResult kreiss_constant_continuous(const CMatrix& m, const SearchConfig& cfg = {});

/// sup over |z| > 1 of (|z| - 1) |(zI - M)^-1|.
SupSearchResult kreiss_constant_discrete(const CMatrix& m, const SearchConfig& cfg = {});

/// sup over Re z > 0 of |(zI - M)^-1| * min over sigma(M) outside the open
/// right half-plane of |z - lambda|; +inf when that set is empty.
SupSearchResult calK_continuous(const CMatrix& m, const SearchConfig& cfg = {});

/// sup over |z| > 1 of |(zI - M)^-1| * min over sigma(M) of |z - lambda|.
SupSearchResult calK_discrete(const CMatrix& m, const SearchConfig& cfg = {});

} // namespace kreiss

#pragma once

#include "hml/petersson.hpp"

#include <functional>
#include <optional>
#include <string>

namespace hml {

// Eigenvalue cache, one JSON file per weight:
//   {"k","n_max","dim","forms":[{"index","lambda_hex":[...]}],
//    "prec_bits","weights_hex":[...],"c_max","checksum"}
// Hex-float strings round-trip bit-exactly. A checksum mismatch or any
// parse failure triggers a rebuild, never a hard failure.
std::string eigen_cache_path(const std::string& cache_dir, long k);

void save_harmonic_basis(const std::string& cache_dir, const HarmonicBasis& basis,
                         long n_max, Precision prec);
std::optional<HarmonicBasis> load_harmonic_basis(const std::string& cache_dir, long k,
                                                 long n_max, Precision prec, long c_max);

// Returns the cached basis when the cached n_max/prec cover the request
// (rebuilding weights if c_max differs); otherwise rebuilds the whole entry
// and atomically replaces the file. c_max < 0 means the default truncation
// rule for the solve pairs (1, n), n <= dim.
HarmonicBasis cache_get_or_build(const std::string& cache_dir, long k, long n_max,
                                 Precision prec, long c_max = -1);

long default_solver_c_max(long k);

// Fitted envelope constants, keyed by "<lemma id>:<grid hash>"; computed
// once by fit() and asserted thereafter.
double constants_get_or_fit(const std::string& cache_dir, const std::string& key,
                            const std::function<double()>& fit);

uint64_t fnv1a64(const std::string& s);

}  // namespace hml

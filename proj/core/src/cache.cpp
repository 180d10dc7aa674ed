#include "hml/cache.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>

namespace hml {

namespace fs = std::filesystem;
using nlohmann::json;

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string eigen_cache_path(const std::string& cache_dir, long k) {
  return (fs::path(cache_dir) / ("eigen_k" + std::to_string(k) + ".json")).string();
}

long default_solver_c_max(long k) {
  long d = dim_cusp_forms(k);
  long best = default_c_max(1, 1, k);
  for (long n = 2; n <= std::max(d, 1L); ++n) best = std::max(best, default_c_max(1, n, k));
  return best;
}

namespace {

std::string forms_payload(const HarmonicBasis& basis, long n_max) {
  // Canonical content string that the checksum covers.
  std::string payload = std::to_string(basis.k) + "|" + std::to_string(n_max);
  for (const auto& f : basis.forms) {
    payload += "|f" + std::to_string(f.index);
    for (long n = 1; n <= n_max; ++n) payload += "," + f.lambda[(size_t)n].hex();
  }
  for (const auto& w : basis.weights) payload += "|w" + w.hex();
  return payload;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
  }
  fs::rename(tmp, path);
}

std::mutex g_cache_mu;

}  // namespace

void save_harmonic_basis(const std::string& cache_dir, const HarmonicBasis& basis,
                         long n_max, Precision prec) {
  fs::create_directories(cache_dir);
  json j;
  j["k"] = basis.k;
  j["n_max"] = n_max;
  j["dim"] = basis.dim();
  j["prec_bits"] = (long)prec.bits;
  j["c_max"] = basis.c_max;
  json forms = json::array();
  for (const auto& f : basis.forms) {
    json jf;
    jf["index"] = f.index;
    json lh = json::array();
    for (long n = 1; n <= n_max; ++n) lh.push_back(f.lambda[(size_t)n].hex());
    jf["lambda_hex"] = lh;
    forms.push_back(jf);
  }
  j["forms"] = forms;
  json wh = json::array();
  for (const auto& w : basis.weights) wh.push_back(w.hex());
  j["weights_hex"] = wh;
  j["checksum"] = fnv1a64(forms_payload(basis, n_max));
  atomic_write(eigen_cache_path(cache_dir, basis.k), j.dump());
}

std::optional<HarmonicBasis> load_harmonic_basis(const std::string& cache_dir, long k,
                                                 long n_max, Precision prec, long c_max) {
  std::string path = eigen_cache_path(cache_dir, k);
  if (!fs::exists(path)) return std::nullopt;
  try {
    std::ifstream in(path, std::ios::binary);
    json j = json::parse(in);
    long cached_nmax = j.at("n_max").get<long>();
    long cached_prec = j.at("prec_bits").get<long>();
    if (cached_nmax < n_max || cached_prec < prec.bits) return std::nullopt;

    HarmonicBasis basis;
    basis.k = k;
    basis.c_max = j.at("c_max").get<long>();
    long dim = j.at("dim").get<long>();
    for (long fi = 0; fi < dim; ++fi) {
      const json& jf = j.at("forms").at((size_t)fi);
      Eigenform f;
      f.k = k;
      f.index = jf.at("index").get<int>();
      f.exact = false;
      f.lambda.assign((size_t)cached_nmax + 1, Real(cached_prec));
      const json& lh = jf.at("lambda_hex");
      for (long n = 1; n <= cached_nmax; ++n)
        f.lambda[(size_t)n] = Real::from_hex(lh.at((size_t)(n - 1)).get<std::string>(), cached_prec);
      basis.forms.push_back(std::move(f));
    }
    for (const auto& wh : j.at("weights_hex"))
      basis.weights.push_back(Real::from_hex(wh.get<std::string>(), cached_prec));

    uint64_t sum = j.at("checksum").get<uint64_t>();
    if (sum != fnv1a64(forms_payload(basis, cached_nmax))) {
      std::fprintf(stderr, "hml: cache checksum mismatch for k=%ld, rebuilding\n", k);
      return std::nullopt;
    }
    if (c_max >= 0 && basis.c_max != c_max) {
      // Eigenvalues are reusable; only the weights depend on c_max.
      basis = solve_harmonic_weights(k, std::move(basis.forms), c_max, Precision(cached_prec));
    }
    return basis;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hml: unreadable cache for k=%ld (%s), rebuilding\n", k, e.what());
    return std::nullopt;
  }
}

HarmonicBasis cache_get_or_build(const std::string& cache_dir, long k, long n_max,
                                 Precision prec, long c_max) {
  std::lock_guard<std::mutex> lk(g_cache_mu);
  long use_cmax = c_max >= 0 ? c_max : default_solver_c_max(k);
  if (auto cached = load_harmonic_basis(cache_dir, k, n_max, prec, use_cmax)) return *cached;
  auto forms = hecke_eigenforms(k, std::max(n_max, 2L), prec);
  HarmonicBasis basis = solve_harmonic_weights(k, std::move(forms), use_cmax, prec);
  save_harmonic_basis(cache_dir, basis, std::max(n_max, 2L), prec);
  return basis;
}

double constants_get_or_fit(const std::string& cache_dir, const std::string& key,
                            const std::function<double()>& fit) {
  std::lock_guard<std::mutex> lk(g_cache_mu);
  fs::create_directories(cache_dir);
  fs::path path = fs::path(cache_dir) / "constants.json";
  json j = json::object();
  if (fs::exists(path)) {
    try {
      std::ifstream in(path);
      j = json::parse(in);
    } catch (...) {
      j = json::object();
    }
  }
  if (j.contains(key)) return j.at(key).get<double>();
  double v = fit();
  j[key] = v;
  atomic_write(path.string(), j.dump(2));
  return v;
}

}  // namespace hml

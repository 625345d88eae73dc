#pragma once
// Counting plane trees by height, exactly and approximately.
//
// Conventions used across the whole library:
//   H(n, m) = number of n-node plane trees of height < m, so H(n, m) = C_{n-1}
//             once m >= n, H(n, 1) = 0 for n >= 2, H(1, m) = 1 for m >= 1.
//   E(n, h) = number of n-node plane trees of height exactly h
//           = H(n, h+1) - H(n, h).
//
// Two backends: exact (GMP integers) and log_approx (LogReal log-magnitudes).
// Two construction routes that must agree:
//   dp          - the first-subtree recurrence
//                 H[n][m] = [n=1] + sum_{j<n} H[j][m-1] * H[n-j][m],
//                 E[n][h] = sum_{j<n} (E[j][h-1] * H[n-j][h+1]
//                                      + H[j][h-1] * E[n-j][h]),
//                 built eagerly as a dense rectangle.
//   closed_form - per-cell evaluation of
//                 H(n, m) = 4^n/(m+1) *
//                           sum_{k=1}^{floor(m/2)} sin^2(t_k) cos^{2n-2}(t_k),
//                 t_k = pi k/(m+1), lazily and memoized; the exact backend
//                 rounds a certified high-precision value to the integer, the
//                 log backend evaluates the same sum in doubles (absolute
//                 error in log H around 1e-13).
//
// The log backend's E cells subtract two nearly equal logs; when the gap is
// below 1e-6 and the height is small the cell silently switches to certified
// integer subtraction, otherwise the noisy difference is clamped at zero
// (such cells sit in far tails and carry no usable mass).

#include "treelab/log_real.hpp"

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

namespace treelab {

enum class Backend { exact, log_approx };

mpz_class catalan(int n);

class CountTable {
 public:
  // dense DP rectangle built from the first-subtree recurrence, eager
  static CountTable dp(int n_max, int m_max, Backend backend);
  // closed-form backed cells, lazy
  static CountTable closed_form(int n_max, int m_max, Backend backend);
  // adopt fully materialized dense cells; used by the cache loader, shapes
  // must match what dp() would produce
  static CountTable from_cells(int n_max, int m_max, Backend backend,
                               std::vector<std::vector<mpz_class>> hz,
                               std::vector<std::vector<mpz_class>> ez,
                               std::vector<std::vector<LogReal>> hl,
                               std::vector<std::vector<LogReal>> el);

  int n_max() const;
  int m_max() const;
  Backend backend() const;
  bool covers(int n, int m) const;
  std::string id() const;  // identifies (source, backend, sizes, format)

  // single cells; log view works on both backends
  LogReal H(int n, int m) const;
  LogReal E(int n, int h) const;
  mpz_class H_int(int n, int m) const;  // exact backend only
  mpz_class E_int(int n, int h) const;

  // whole rows for partition sums: H row has entries m = 0..min(n, m_max),
  // E row has entries h = 0..n-1
  std::vector<LogReal> row_H(int n) const;
  std::vector<LogReal> row_E(int n) const;

  // memoizing variants: first call per n computes and stores the row, later
  // calls return the stored copy; references stay valid for the table's life
  const std::vector<LogReal>& row_H_cached(int n) const;
  const std::vector<LogReal>& row_E_cached(int n) const;

  // bulk-fill H cells for n' <= n, m' <= m so that concurrent col() reads
  // are lock-free afterwards; E cells stay lazy (filled on access)
  void prewarm(int n, int m) const;

  // lock-free-after-fill column reads for samplers and forest convolutions
  class Col {
   public:
    LogReal get(int n) const;
    LogReal get_E(int n) const;  // exact-height count at height m (column's m)

   private:
    friend class CountTable;
    const void* impl_;
    int m_;
  };
  Col col(int m) const;

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

CountTable build_counts(int n_max, int m_max, Backend backend);

// Closed-form evaluation of H(n, m) at a chosen precision. certified means
// the true value provably lies within 1/2 of rounded; callers retry with
// more bits otherwise.
struct TrigCount {
  double log10_value = 0.0;
  bool certified = false;
  mpz_class rounded;
};
TrigCount trig_count(int n, int m, int precision_bits);

// Auto-retrying certified version; always exact.
mpz_class trig_count_exact(int n, int m);

// Double-precision log of H(n, m) through the same closed form.
double trig_log_H(int n, int m);

// Leading-order form 4^n/(m+1) * tan^2(pi/(m+1)) / (1+tan^2(pi/(m+1)))^n.
// Valid as an approximation for m well below sqrt(n); refuses m >= n.
LogReal asymptotic_count(int n, int m);

// F_r(n, m) = sum over compositions n_1+...+n_r = n of prod H(n_i, m).
// forest_count_all returns F_r(n, m) for every r = 1..r_max in one
// incremental pass (O(r_max * n^2) integer operations).
mpz_class forest_count(int r, int n, int m, const CountTable& table);
std::vector<mpz_class> forest_count_all(int r_max, int n, int m, const CountTable& table);

LogReal logreal_from_mpz(const mpz_class& z);
double log10_mpz(const mpz_class& z);

// --- table cache (versioned JSON lines) ---

struct CacheEntryInfo {
  std::string path;
  int format = 0;
  int n_max = 0;
  int m_max = 0;
  std::string backend;
  std::string source;
  bool hash_ok = false;
  long records = 0;
};

std::string cache_file_name(int n_max, int m_max, Backend backend);
void save_table(const CountTable& table, const std::string& path);
CountTable load_table(const std::string& path);
CacheEntryInfo inspect_cache_file(const std::string& path);
std::vector<CacheEntryInfo> list_cache(const std::string& dir);
int purge_cache(const std::string& dir);  // returns number of files removed
std::string default_cache_dir();          // TREELAB_CACHE env or ./treelab-cache

}  // namespace treelab

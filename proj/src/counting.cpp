// CountTable: dense DP tables and lazy closed-form tables over both backends.
//
// Layout notes. H values saturate at C_{n-1} once m >= n, so dense rows only
// store columns m <= min(n, m_max) and accessors clamp. Lazy tables hold
// dense per-m columns allocated on first touch, each cell published through
// an atomic flag so that post-warmup reads are lock-free; cell values are
// deterministic, so a racing recompute is benign and the mutex only guards
// allocation and the store itself. Row accessors on lazy tables bypass the
// column store entirely (a full row would otherwise allocate one column per
// entry); callers that need a row repeatedly should cache it themselves.

#include "treelab/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace treelab {

namespace {

// below this log-gap the log-backend subtraction H(n,h+1) - H(n,h) loses
// relative accuracy; cells at small heights switch to certified integers
// (cheap there: few closed-form terms), deep-tail cells clamp instead
constexpr double kECancelGap = 1e-6;
constexpr int kECertifyHeightCap = 64;

int h_cap(int n, int m_max) { return std::min(n, m_max); }
int e_cap(int n, int m_max) { return std::min(n - 1, m_max - 1); }

LogReal log_cell_from_trig(int n, int m) {
  double v = trig_log_H(n, m);
  if (!std::isfinite(v)) return LogReal::zero();
  return LogReal::exp_of(dd{v}, +1);
}

}  // namespace

struct CountTable::Impl {
  Backend backend = Backend::exact;
  bool lazy = false;
  int n_max = 0;
  int m_max = 0;

  // dense DP storage, indexed [n][m] resp. [n][h]
  std::vector<std::vector<mpz_class>> hz, ez;
  std::vector<std::vector<LogReal>> hl, el;

  // lazy closed-form storage
  struct LazyCol {
    std::unique_ptr<std::atomic<unsigned char>[]> done;
    std::vector<LogReal> lval;
    std::vector<mpz_class> ival;
  };
  std::vector<std::atomic<LazyCol*>> hcols, ecols;
  std::vector<std::unique_ptr<LazyCol>> col_pool;
  std::mutex mu;

  // memoized whole rows (row_H_cached / row_E_cached); map nodes keep the
  // returned references stable
  std::mutex rows_mu;
  std::map<int, std::vector<LogReal>> h_rows, e_rows;

  void check_n(int n) const {
    if (n < 1 || n > n_max) throw std::out_of_range("CountTable: n out of range");
  }

  LazyCol& ensure_col(std::vector<std::atomic<LazyCol*>>& cols, int idx) {
    LazyCol* p = cols[static_cast<size_t>(idx)].load(std::memory_order_acquire);
    if (p) return *p;
    std::lock_guard<std::mutex> g(mu);
    p = cols[static_cast<size_t>(idx)].load(std::memory_order_relaxed);
    if (!p) {
      auto col = std::make_unique<LazyCol>();
      col->done.reset(new std::atomic<unsigned char>[n_max + 1]());
      if (backend == Backend::exact)
        col->ival.resize(static_cast<size_t>(n_max) + 1);
      else
        col->lval.resize(static_cast<size_t>(n_max) + 1);
      p = col.get();
      col_pool.push_back(std::move(col));
      cols[static_cast<size_t>(idx)].store(p, std::memory_order_release);
    }
    return *p;
  }

  // lazy H cell; the stored value is H(n, m) with saturation applied, so a
  // column is self-contained for every n
  template <typename T, typename Fill>
  const T& lazy_cell(std::vector<std::atomic<LazyCol*>>& cols, int idx, int n,
                     std::vector<T> LazyCol::*field, Fill fill) {
    LazyCol& col = ensure_col(cols, idx);
    std::atomic<unsigned char>& flag = col.done[n];
    if (!flag.load(std::memory_order_acquire)) {
      T v = fill();  // pure and deterministic, computed outside the lock
      std::lock_guard<std::mutex> g(mu);
      if (!flag.load(std::memory_order_relaxed)) {
        (col.*field)[static_cast<size_t>(n)] = std::move(v);
        flag.store(1, std::memory_order_release);
      }
    }
    return (col.*field)[static_cast<size_t>(n)];
  }

  // saturated cells (m >= n) are stored canonically in column n, so every
  // column index stays within m_max whenever the access is valid at all
  mpz_class lazy_H_int(int n, int m) {
    int mm = std::min(m, n);
    if (mm <= 1) return (n == 1 && mm == 1) ? 1 : 0;
    return lazy_cell(hcols, mm, n, &LazyCol::ival,
                     [&] { return trig_count_exact(n, mm); });
  }

  LogReal lazy_H_log(int n, int m) {
    int mm = std::min(m, n);
    if (mm <= 1) return (n == 1 && mm == 1) ? LogReal::one() : LogReal::zero();
    return lazy_cell(hcols, mm, n, &LazyCol::lval, [&] { return log_cell_from_trig(n, mm); });
  }

  // one lazy E value, no memoization; used by single-cell accessors and rows
  LogReal lazy_E_log_value(int n, int h) {
    if (h == 0) return n == 1 ? LogReal::one() : LogReal::zero();
    if (h >= n) return LogReal::zero();
    LogReal la = log_cell_from_trig(n, std::min(h + 1, n));
    LogReal lb = log_cell_from_trig(n, h);
    if (lb.is_zero()) return la;
    dd gap = dd_sub(la.log(), lb.log());
    if (gap.hi < kECancelGap && h <= kECertifyHeightCap)
      return logreal_from_mpz(trig_count_exact(n, h + 1) - trig_count_exact(n, h));
    LogReal d = la - lb;
    return d.sign() > 0 ? d : LogReal::zero();
  }

  mpz_class lazy_E_int_value(int n, int h) {
    if (h == 0) return n == 1 ? 1 : 0;
    if (h >= n) return 0;
    return trig_count_exact(n, std::min(h + 1, n)) - trig_count_exact(n, h);
  }
};

namespace {

void build_dp_exact(CountTable::Impl& im) {
  im.hz.resize(static_cast<size_t>(im.n_max) + 1);
  im.ez.resize(static_cast<size_t>(im.n_max) + 1);
  for (int n = 1; n <= im.n_max; ++n) {
    int cap = h_cap(n, im.m_max);
    auto& row = im.hz[static_cast<size_t>(n)];
    row.assign(static_cast<size_t>(cap) + 1, 0);
    if (n == 1) {
      if (cap >= 1) row[1] = 1;
    } else {
      for (int m = 2; m <= cap; ++m) {
        mpz_class acc = 0;
        for (int j = 1; j < n; ++j) {
          const mpz_class& a = im.hz[static_cast<size_t>(j)][static_cast<size_t>(std::min(j, m - 1))];
          if (a == 0) continue;
          acc += a * im.hz[static_cast<size_t>(n - j)][static_cast<size_t>(std::min(n - j, m))];
        }
        row[static_cast<size_t>(m)] = acc;
      }
    }
    int ecap = e_cap(n, im.m_max);
    auto& erow = im.ez[static_cast<size_t>(n)];
    if (ecap >= 0) erow.assign(static_cast<size_t>(ecap) + 1, 0);
    if (n == 1) {
      erow[0] = 1;
    } else {
      for (int h = 1; h <= ecap; ++h) {
        mpz_class acc = 0;
        for (int j = 1; j < n; ++j) {
          if (h - 1 <= j - 1)
            acc += im.ez[static_cast<size_t>(j)][static_cast<size_t>(h - 1)] *
                   im.hz[static_cast<size_t>(n - j)][static_cast<size_t>(std::min(n - j, h + 1))];
          if (h <= n - j - 1)
            acc += im.hz[static_cast<size_t>(j)][static_cast<size_t>(std::min(j, h - 1))] *
                   im.ez[static_cast<size_t>(n - j)][static_cast<size_t>(h)];
        }
        erow[static_cast<size_t>(h)] = acc;
      }
    }
  }
}

void build_dp_log(CountTable::Impl& im) {
  im.hl.resize(static_cast<size_t>(im.n_max) + 1);
  im.el.resize(static_cast<size_t>(im.n_max) + 1);
  for (int n = 1; n <= im.n_max; ++n) {
    int cap = h_cap(n, im.m_max);
    auto& row = im.hl[static_cast<size_t>(n)];
    row.assign(static_cast<size_t>(cap) + 1, LogReal::zero());
    if (n == 1) {
      if (cap >= 1) row[1] = LogReal::one();
    } else {
      for (int m = 2; m <= cap; ++m) {
        LogReal acc = LogReal::zero();
        for (int j = 1; j < n; ++j) {
          const LogReal& a = im.hl[static_cast<size_t>(j)][static_cast<size_t>(std::min(j, m - 1))];
          if (a.is_zero()) continue;
          acc = acc + a * im.hl[static_cast<size_t>(n - j)][static_cast<size_t>(std::min(n - j, m))];
        }
        row[static_cast<size_t>(m)] = acc;
      }
    }
    int ecap = e_cap(n, im.m_max);
    auto& erow = im.el[static_cast<size_t>(n)];
    if (ecap >= 0) erow.assign(static_cast<size_t>(ecap) + 1, LogReal::zero());
    if (n == 1) {
      erow[0] = LogReal::one();
    } else {
      for (int h = 1; h <= ecap; ++h) {
        LogReal acc = LogReal::zero();
        for (int j = 1; j < n; ++j) {
          if (h - 1 <= j - 1) {
            const LogReal& a = im.el[static_cast<size_t>(j)][static_cast<size_t>(h - 1)];
            if (!a.is_zero())
              acc = acc + a * im.hl[static_cast<size_t>(n - j)][static_cast<size_t>(std::min(n - j, h + 1))];
          }
          if (h <= n - j - 1) {
            const LogReal& a = im.hl[static_cast<size_t>(j)][static_cast<size_t>(std::min(j, h - 1))];
            if (!a.is_zero())
              acc = acc + a * im.el[static_cast<size_t>(n - j)][static_cast<size_t>(h)];
          }
        }
        erow[static_cast<size_t>(h)] = acc;
      }
    }
  }
}

std::shared_ptr<CountTable::Impl> make_impl(int n_max, int m_max, Backend backend, bool lazy) {
  if (n_max < 1 || m_max < 1) throw std::invalid_argument("CountTable: need n_max, m_max >= 1");
  auto im = std::make_shared<CountTable::Impl>();
  im->backend = backend;
  im->lazy = lazy;
  im->n_max = n_max;
  im->m_max = m_max;
  if (lazy) {
    im->hcols = std::vector<std::atomic<CountTable::Impl::LazyCol*>>(static_cast<size_t>(m_max) + 1);
    im->ecols = std::vector<std::atomic<CountTable::Impl::LazyCol*>>(static_cast<size_t>(m_max));
  } else if (backend == Backend::exact) {
    build_dp_exact(*im);
  } else {
    build_dp_log(*im);
  }
  return im;
}

}  // namespace

CountTable CountTable::dp(int n_max, int m_max, Backend backend) {
  CountTable t;
  t.impl_ = make_impl(n_max, m_max, backend, false);
  return t;
}

CountTable CountTable::closed_form(int n_max, int m_max, Backend backend) {
  CountTable t;
  t.impl_ = make_impl(n_max, m_max, backend, true);
  return t;
}

CountTable CountTable::from_cells(int n_max, int m_max, Backend backend,
                                  std::vector<std::vector<mpz_class>> hz,
                                  std::vector<std::vector<mpz_class>> ez,
                                  std::vector<std::vector<LogReal>> hl,
                                  std::vector<std::vector<LogReal>> el) {
  if (n_max < 1 || m_max < 1) throw std::invalid_argument("CountTable: need n_max, m_max >= 1");
  auto im = std::make_shared<Impl>();
  im->backend = backend;
  im->lazy = false;
  im->n_max = n_max;
  im->m_max = m_max;
  auto check_shape = [&](const auto& h, const auto& e) {
    if (static_cast<int>(h.size()) != n_max + 1 || static_cast<int>(e.size()) != n_max + 1)
      throw std::invalid_argument("CountTable::from_cells: bad outer shape");
    for (int n = 1; n <= n_max; ++n) {
      if (static_cast<int>(h[static_cast<size_t>(n)].size()) != h_cap(n, m_max) + 1 ||
          static_cast<int>(e[static_cast<size_t>(n)].size()) != e_cap(n, m_max) + 1)
        throw std::invalid_argument("CountTable::from_cells: bad row shape");
    }
  };
  if (backend == Backend::exact) {
    check_shape(hz, ez);
    im->hz = std::move(hz);
    im->ez = std::move(ez);
  } else {
    check_shape(hl, el);
    im->hl = std::move(hl);
    im->el = std::move(el);
  }
  CountTable t;
  t.impl_ = std::move(im);
  return t;
}

CountTable build_counts(int n_max, int m_max, Backend backend) {
  return CountTable::dp(n_max, m_max, backend);
}

int CountTable::n_max() const { return impl_->n_max; }
int CountTable::m_max() const { return impl_->m_max; }
Backend CountTable::backend() const { return impl_->backend; }

bool CountTable::covers(int n, int m) const {
  return n >= 1 && n <= impl_->n_max && std::min(m, n) <= impl_->m_max;
}

std::string CountTable::id() const {
  std::string s = impl_->lazy ? "cf" : "dp";
  s += impl_->backend == Backend::exact ? "-exact" : "-log";
  s += "-n" + std::to_string(impl_->n_max) + "-m" + std::to_string(impl_->m_max) + "-v1";
  return s;
}

mpz_class CountTable::H_int(int n, int m) const {
  Impl& im = *impl_;
  if (im.backend != Backend::exact)
    throw std::logic_error("CountTable::H_int: log backend has no integer cells");
  im.check_n(n);
  if (m < 0) throw std::out_of_range("CountTable: m out of range");
  int mm = std::min(m, n);
  if (mm > im.m_max) throw std::out_of_range("CountTable: m beyond table");
  if (im.lazy) return im.lazy_H_int(n, m);
  return im.hz[static_cast<size_t>(n)][static_cast<size_t>(mm)];
}

mpz_class CountTable::E_int(int n, int h) const {
  Impl& im = *impl_;
  if (im.backend != Backend::exact)
    throw std::logic_error("CountTable::E_int: log backend has no integer cells");
  im.check_n(n);
  if (h < 0) throw std::out_of_range("CountTable: h out of range");
  if (h >= n) return 0;
  if (std::min(h + 1, n) > im.m_max) throw std::out_of_range("CountTable: h beyond table");
  if (im.lazy) return im.lazy_E_int_value(n, h);
  return im.ez[static_cast<size_t>(n)][static_cast<size_t>(h)];
}

LogReal CountTable::H(int n, int m) const {
  Impl& im = *impl_;
  im.check_n(n);
  if (m < 0) throw std::out_of_range("CountTable: m out of range");
  int mm = std::min(m, n);
  if (mm > im.m_max) throw std::out_of_range("CountTable: m beyond table");
  if (im.lazy) {
    if (im.backend == Backend::exact) return logreal_from_mpz(im.lazy_H_int(n, m));
    return im.lazy_H_log(n, m);
  }
  if (im.backend == Backend::exact)
    return logreal_from_mpz(im.hz[static_cast<size_t>(n)][static_cast<size_t>(mm)]);
  return im.hl[static_cast<size_t>(n)][static_cast<size_t>(mm)];
}

LogReal CountTable::E(int n, int h) const {
  Impl& im = *impl_;
  im.check_n(n);
  if (h < 0) throw std::out_of_range("CountTable: h out of range");
  if (h >= n) return LogReal::zero();
  if (std::min(h + 1, n) > im.m_max) throw std::out_of_range("CountTable: h beyond table");
  if (im.lazy) {
    if (im.backend == Backend::exact) return logreal_from_mpz(im.lazy_E_int_value(n, h));
    return im.lazy_E_log_value(n, h);
  }
  if (im.backend == Backend::exact)
    return logreal_from_mpz(im.ez[static_cast<size_t>(n)][static_cast<size_t>(h)]);
  return im.el[static_cast<size_t>(n)][static_cast<size_t>(h)];
}

std::vector<LogReal> CountTable::row_H(int n) const {
  Impl& im = *impl_;
  im.check_n(n);
  int cap = h_cap(n, im.m_max);
  std::vector<LogReal> row(static_cast<size_t>(cap) + 1, LogReal::zero());
  if (!im.lazy) {
    for (int m = 1; m <= cap; ++m) row[static_cast<size_t>(m)] = H(n, m);
    return row;
  }
  for (int m = 1; m <= cap; ++m) {
    if (im.backend == Backend::exact)
      row[static_cast<size_t>(m)] = logreal_from_mpz(trig_count_exact(n, m));
    else
      row[static_cast<size_t>(m)] = log_cell_from_trig(n, m);
  }
  return row;
}

std::vector<LogReal> CountTable::row_E(int n) const {
  Impl& im = *impl_;
  im.check_n(n);
  if (std::min(n, im.m_max) < n)
    throw std::out_of_range("CountTable::row_E: full height support needs m_max >= n");
  std::vector<LogReal> row(static_cast<size_t>(n), LogReal::zero());
  if (n == 1) {
    row[0] = LogReal::one();
    return row;
  }
  if (!im.lazy) {
    for (int h = 1; h < n; ++h) row[static_cast<size_t>(h)] = E(n, h);
    return row;
  }
  if (im.backend == Backend::exact) {
    // one certified evaluation per column, differenced exactly
    mpz_class prev = 0;  // H(n, 1)
    for (int h = 1; h < n; ++h) {
      mpz_class cur = trig_count_exact(n, h + 1);
      row[static_cast<size_t>(h)] = logreal_from_mpz(cur - prev);
      prev = std::move(cur);
    }
    return row;
  }
  for (int h = 1; h < n; ++h) row[static_cast<size_t>(h)] = im.lazy_E_log_value(n, h);
  return row;
}

const std::vector<LogReal>& CountTable::row_H_cached(int n) const {
  Impl& im = *impl_;
  {
    std::lock_guard<std::mutex> g(im.rows_mu);
    auto it = im.h_rows.find(n);
    if (it != im.h_rows.end()) return it->second;
  }
  // computed outside the lock; a racing duplicate is discarded by emplace
  std::vector<LogReal> v = row_H(n);
  std::lock_guard<std::mutex> g(im.rows_mu);
  return im.h_rows.emplace(n, std::move(v)).first->second;
}

const std::vector<LogReal>& CountTable::row_E_cached(int n) const {
  Impl& im = *impl_;
  {
    std::lock_guard<std::mutex> g(im.rows_mu);
    auto it = im.e_rows.find(n);
    if (it != im.e_rows.end()) return it->second;
  }
  std::vector<LogReal> v = row_E(n);
  std::lock_guard<std::mutex> g(im.rows_mu);
  return im.e_rows.emplace(n, std::move(v)).first->second;
}

void CountTable::prewarm(int n, int m) const {
  Impl& im = *impl_;
  if (!im.lazy) return;
  n = std::min(n, im.n_max);
  m = std::min(m, im.m_max);
  for (int mm = 2; mm <= m; ++mm) {
    for (int nn = 1; nn <= n; ++nn) {
      if (im.backend == Backend::exact)
        im.lazy_H_int(nn, mm);
      else
        im.lazy_H_log(nn, mm);
    }
  }
}

CountTable::Col CountTable::col(int m) const {
  Impl& im = *impl_;
  if (m < 0 || m > im.m_max) throw std::out_of_range("CountTable::col: m out of range");
  Col c;
  c.impl_ = impl_.get();
  c.m_ = m;
  return c;
}

LogReal CountTable::Col::get(int n) const {
  auto* im = static_cast<CountTable::Impl*>(const_cast<void*>(impl_));
  im->check_n(n);
  if (im->lazy) {
    if (im->backend == Backend::exact) return logreal_from_mpz(im->lazy_H_int(n, m_));
    return im->lazy_H_log(n, m_);
  }
  int mm = std::min(m_, n);
  if (im->backend == Backend::exact)
    return logreal_from_mpz(im->hz[static_cast<size_t>(n)][static_cast<size_t>(mm)]);
  return im->hl[static_cast<size_t>(n)][static_cast<size_t>(mm)];
}

LogReal CountTable::Col::get_E(int n) const {
  auto* im = static_cast<CountTable::Impl*>(const_cast<void*>(impl_));
  im->check_n(n);
  int h = m_;
  if (h >= n) return h == 0 && n == 1 ? LogReal::one() : LogReal::zero();
  if (n == 1) return h == 0 ? LogReal::one() : LogReal::zero();
  if (h + 1 > im->m_max) throw std::out_of_range("CountTable::Col::get_E: h beyond table");
  if (im->lazy) {
    if (im->backend == Backend::exact)
      return logreal_from_mpz(im->lazy_E_int_value(n, h));
    if (h == 0) return LogReal::zero();
    // memoized via the E column store
    return im->lazy_cell(im->ecols, h, n, &Impl::LazyCol::lval,
                         [&] { return im->lazy_E_log_value(n, h); });
  }
  if (im->backend == Backend::exact)
    return logreal_from_mpz(im->ez[static_cast<size_t>(n)][static_cast<size_t>(h)]);
  return im->el[static_cast<size_t>(n)][static_cast<size_t>(h)];
}

mpz_class forest_count(int r, int n, int m, const CountTable& table) {
  std::vector<mpz_class> all = forest_count_all(r, n, m, table);
  return all.back();
}

std::vector<mpz_class> forest_count_all(int r_max, int n, int m, const CountTable& table) {
  if (r_max < 1 || n < 1 || r_max > n)
    throw std::invalid_argument("forest_count: need 1 <= r_max <= n");
  if (table.backend() != Backend::exact)
    throw std::invalid_argument("forest_count: needs an exact-backend table");
  if (!table.covers(n, m)) throw std::out_of_range("forest_count: table too small");
  // base column H(i, m), i = 1..n
  std::vector<mpz_class> h(static_cast<size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) h[static_cast<size_t>(i)] = table.H_int(i, m);
  std::vector<mpz_class> f = h;  // F_1
  std::vector<mpz_class> out;
  out.push_back(f[static_cast<size_t>(n)]);
  for (int r = 2; r <= r_max; ++r) {
    std::vector<mpz_class> g(static_cast<size_t>(n) + 1);
    for (int i = r; i <= n; ++i) {
      mpz_class acc = 0;
      for (int j = 1; j <= i - r + 1; ++j) {
        if (h[static_cast<size_t>(j)] == 0) continue;
        const mpz_class& prev = f[static_cast<size_t>(i - j)];
        if (prev == 0) continue;
        acc += h[static_cast<size_t>(j)] * prev;
      }
      g[static_cast<size_t>(i)] = acc;
    }
    f = std::move(g);
    out.push_back(f[static_cast<size_t>(n)]);
  }
  return out;
}

}  // namespace treelab

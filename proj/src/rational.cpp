#include "bootlab/rational.hpp"

#include "bootlab/errors.hpp"

#include <cmath>
#include <numeric>

namespace bootlab {

Int dot(const IVec& a, const IVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Q dot(const QVec& a, const QVec& b) {
  Q s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Q dot(const IVec& a, const QVec& b) {
  Q s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Int norm2(const IVec& a) { return dot(a, a); }

QVec to_q(const IVec& v) {
  QVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

IVec operator+(const IVec& a, const IVec& b) {
  IVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

IVec operator-(const IVec& a, const IVec& b) {
  IVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

IVec operator-(const IVec& a) {
  IVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
  return c;
}

IVec scale(Int k, const IVec& a) {
  IVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = k * a[i];
  return c;
}

IVec primitive(const IVec& v) {
  Int g = 0;
  for (Int x : v) g = std::gcd(g, x < 0 ? -x : x);
  if (g <= 1) return v;
  IVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

IVec clear_denominators(const QVec& v) {
  Z l = 1;
  for (const Q& q : v) l = boost::multiprecision::lcm(l, Z(boost::multiprecision::denominator(q)));
  std::vector<Z> nums(v.size());
  Z g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    nums[i] = boost::multiprecision::numerator(v[i]) * (l / boost::multiprecision::denominator(v[i]));
    g = boost::multiprecision::gcd(g, abs(nums[i]));
  }
  IVec out(v.size(), 0);
  if (g == 0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Z x = nums[i] / g;
    if (abs(x) > Z(std::numeric_limits<Int>::max() / 4))
      throw Error(ErrorKind::PreconditionFailed, "integer overflow clearing denominators");
    out[i] = x.convert_to<Int>();
  }
  return out;
}

Int floor_q(const Q& q) {
  Z n = boost::multiprecision::numerator(q);
  Z d = boost::multiprecision::denominator(q);
  Z f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f.convert_to<Int>();
}

Int ceil_q(const Q& q) {
  Z n = boost::multiprecision::numerator(q);
  Z d = boost::multiprecision::denominator(q);
  Z f = n / d;
  if (n % d != 0 && n > 0) f += 1;
  return f.convert_to<Int>();
}

double to_double(const Q& q) { return q.convert_to<double>(); }

Q from_double(double x) { return Q(x); }

Q parse_q(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Q(Z(s));
    Z n(s.substr(0, slash));
    Z d(s.substr(slash + 1));
    if (d == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + s + "'");
    return Q(n, d);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(ErrorKind::ParseError, "bad rational '" + s + "'");
  }
}

std::string q_str(const Q& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return q.str();
}

namespace {

// reduced row echelon form in place; returns pivot columns
std::vector<int> rref(QMat& m, int ncols) {
  std::vector<int> pivots;
  int row = 0;
  for (int c = 0; c < ncols && row < static_cast<int>(m.size()); ++c) {
    int p = -1;
    for (int r = row; r < static_cast<int>(m.size()); ++r)
      if (m[r][c] != 0) { p = r; break; }
    if (p < 0) continue;
    std::swap(m[p], m[row]);
    Q inv = 1 / m[row][c];
    for (int k = c; k < ncols; ++k) m[row][k] *= inv;
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Q f = m[r][c];
      for (int k = c; k < ncols; ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank(QMat m) {
  if (m.empty()) return 0;
  return static_cast<int>(rref(m, static_cast<int>(m[0].size())).size());
}

QMat nullspace(const QMat& rows, int n) {
  QMat m = rows;
  std::vector<int> piv = rref(m, n);
  std::vector<bool> is_piv(n, false);
  for (int c : piv) is_piv[c] = true;
  QMat basis;
  for (int f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    QVec v(n, Q(0));
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
    basis.push_back(v);
  }
  return basis;
}

std::vector<IVec> integer_nullspace(const std::vector<IVec>& rows, int n) {
  QMat m;
  for (const auto& r : rows) m.push_back(to_q(r));
  std::vector<IVec> out;
  for (const auto& v : nullspace(m, n)) out.push_back(clear_denominators(v));
  return out;
}

std::optional<QVec> solve_linear(const QMat& a, const QVec& b) {
  int n = a.empty() ? 0 : static_cast<int>(a[0].size());
  QMat m = a;
  for (std::size_t r = 0; r < m.size(); ++r) m[r].push_back(b[r]);
  std::vector<int> piv = rref(m, n + 1);
  if (!piv.empty() && piv.back() == n) return std::nullopt;
  QVec x(n, Q(0));
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = m[r][n];
  return x;
}

bool linearly_independent(const std::vector<IVec>& vs) {
  if (vs.empty()) return true;
  QMat m;
  for (const auto& v : vs) m.push_back(to_q(v));
  return rank(m) == static_cast<int>(vs.size());
}

}  // namespace bootlab

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bootlab {

using Int = long long;
using IVec = std::vector<Int>;
using Q = boost::multiprecision::mpq_rational;
using Z = boost::multiprecision::mpz_int;
using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;

Int dot(const IVec& a, const IVec& b);
Q dot(const QVec& a, const QVec& b);
Q dot(const IVec& a, const QVec& b);
Int norm2(const IVec& a);

QVec to_q(const IVec& v);
IVec operator+(const IVec& a, const IVec& b);
IVec operator-(const IVec& a, const IVec& b);
IVec operator-(const IVec& a);
IVec scale(Int k, const IVec& a);

// gcd-reduced vector with the same direction; zero stays zero
IVec primitive(const IVec& v);
// positive multiple of v with coprime integer entries
IVec clear_denominators(const QVec& v);

Int floor_q(const Q& q);
Int ceil_q(const Q& q);
double to_double(const Q& q);
Q from_double(double x);

// "p/q" or "p"
Q parse_q(const std::string& s);
std::string q_str(const Q& q);

int rank(QMat m);
// basis of {x in Q^n : row . x = 0 for all rows}
QMat nullspace(const QMat& rows, int n);
// same, scaled to primitive integer vectors
std::vector<IVec> integer_nullspace(const std::vector<IVec>& rows, int n);
// some solution of A x = b, free variables set to zero
std::optional<QVec> solve_linear(const QMat& a, const QVec& b);
bool linearly_independent(const std::vector<IVec>& vs);

}  // namespace bootlab

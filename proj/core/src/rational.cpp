#include "hodge/rational.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace hodge {

namespace {

std::atomic<double> g_tolerance{1e-9};

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Validates [+-]?digits(/digits)? and returns the canonicalized value.
std::optional<Rat> parse_rat_core(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string_view body = text;
  bool negative = false;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  std::string_view num = body, den = "1";
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den)) return std::nullopt;
  mpz_class n(std::string(num), 10), d(std::string(den), 10);
  if (d == 0) return std::nullopt;
  Rat q(n, d);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

}  // namespace

double default_tolerance() { return g_tolerance.load(); }
void set_default_tolerance(double tol) {
  if (!(tol > 0)) throw InvalidInput("tolerance must be positive");
  g_tolerance.store(tol);
}

std::string to_string(const Rat& q) {
  std::string s = q.get_num().get_str();
  if (q.get_den() != 1) s += "/" + q.get_den().get_str();
  return s;
}

std::optional<Rat> parse_rat(std::string_view text) {
  return parse_rat_core(text);
}

Rat rat_from_decimal(std::string_view text) {
  if (text.empty()) throw InvalidInput("empty decimal literal");
  std::string digits;
  long exponent = 0;
  size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  bool seen_digit = false, seen_dot = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (seen_dot) --exponent;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      auto tail = text.substr(pos + 1);
      if (tail.empty()) throw InvalidInput("truncated exponent in decimal");
      char* end = nullptr;
      std::string t(tail);
      long e = std::strtol(t.c_str(), &end, 10);
      if (end == t.c_str() || *end != '\0')
        throw InvalidInput("bad exponent in decimal literal");
      exponent += e;
      pos = text.size() - 1;
    } else {
      throw InvalidInput("bad decimal literal: " + std::string(text));
    }
  }
  if (!seen_digit) throw InvalidInput("bad decimal literal: " + std::string(text));
  Rat q(mpz_class(digits.empty() ? "0" : digits, 10), mpz_class(1));
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0)
    q *= Rat(pow10);
  else
    q /= Rat(pow10);
  q.canonicalize();
  return negative ? Rat(-q) : q;
}

std::optional<Rat> exact_sqrt(const Rat& q) {
  if (sgn(q) < 0) return std::nullopt;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rat r(rn, rd);
  r.canonicalize();
  return r;
}

double to_double(const Rat& q) { return q.get_d(); }

std::string to_string(const Gauss& a) {
  if (sgn(a.im) == 0) return to_string(a.re);
  std::string imag = to_string(abs(a.im)) + "*i";
  if (sgn(a.re) == 0) return (sgn(a.im) < 0 ? "-" : "") + imag;
  return to_string(a.re) + (sgn(a.im) < 0 ? "-" : "+") + imag;
}

std::optional<Gauss> parse_gauss(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // Split into at most two signed terms; scan for +/- that are not leading.
  size_t split = std::string_view::npos;
  for (size_t i = 1; i < text.size(); ++i)
    if (text[i] == '+' || text[i] == '-') {
      split = i;
      break;
    }

  auto parse_term = [](std::string_view term,
                       bool* imaginary) -> std::optional<Rat> {
    *imaginary = false;
    if (term.empty()) return std::nullopt;
    if (term.back() == 'i') {
      *imaginary = true;
      term.remove_suffix(1);
      if (!term.empty() && term.back() == '*') term.remove_suffix(1);
      if (term.empty() || term == "+") return Rat(1);
      if (term == "-") return Rat(-1);
    }
    return parse_rat_core(term);
  };

  bool imag_a = false, imag_b = false;
  if (split == std::string_view::npos) {
    auto v = parse_term(text, &imag_a);
    if (!v) return std::nullopt;
    return imag_a ? Gauss(Rat(0), *v) : Gauss(*v);
  }
  auto a = parse_term(text.substr(0, split), &imag_a);
  auto b = parse_term(text.substr(split), &imag_b);
  if (!a || !b || imag_a == imag_b) return std::nullopt;
  return imag_a ? Gauss(*b, *a) : Gauss(*a, *b);
}

std::string to_string(CD z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace hodge

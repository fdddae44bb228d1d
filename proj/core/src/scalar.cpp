#include "hodge/scalar.hpp"

#include <sstream>

namespace hodge {

std::string field_name(Field f) {
  return f == Field::rational ? "Q" : "Q(i)";
}

Field parse_field(const std::string& name) {
  if (name == "Q") return Field::rational;
  if (name == "Q(i)" || name == "Qi") return Field::gaussian;
  throw InvalidInput("unknown field: " + name);
}

bool is_rational(const GMat& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j).im) != 0) return false;
  return true;
}

bool is_rational(const GVec& v) {
  for (const auto& x : v)
    if (sgn(x.im) != 0) return false;
  return true;
}

namespace {

template <class K>
std::string vec_str(const Vec<K>& v) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << to_string(v[i]);
  }
  os << ']';
  return os.str();
}

template <class K>
std::string mat_str(const Mat<K>& m) {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < m.rows(); ++i) {
    if (i) os << ",\n ";
    os << vec_str(m.row(i));
  }
  os << ']';
  return os.str();
}

}  // namespace

std::string to_string(const QVec& v) { return vec_str(v); }
std::string to_string(const GVec& v) { return vec_str(v); }
std::string to_string(const QMat& m) { return mat_str(m); }
std::string to_string(const GMat& m) { return mat_str(m); }

}  // namespace hodge

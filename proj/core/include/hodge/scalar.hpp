#pragma once

// Runtime field tags and plain-text formatting for vectors and matrices.

#include <string>

#include "hodge/matrix.hpp"

namespace hodge {

enum class Field { rational, gaussian };

std::string field_name(Field f);
Field parse_field(const std::string& name);

// true when every entry has zero imaginary part
bool is_rational(const GMat& m);
bool is_rational(const GVec& v);

std::string to_string(const QVec& v);
std::string to_string(const GVec& v);
std::string to_string(const QMat& m);
std::string to_string(const GMat& m);

}  // namespace hodge

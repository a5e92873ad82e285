#pragma once

#include <string>

#include "approxcc/program.hpp"

namespace approxcc {

// Parses one program in the .real surface syntax:
//
//   def name(x: Real, y: Real): Real = {
//     require(0.1 <= x && x <= 1 && -2 <= y && y <= 2)
//     val t: Real = x * y
//     t + sin(x)
//   } ensuring(res => res +/- 1e-13)
//
// require takes a conjunction of `literal <= ident` / `ident <= literal`
// atoms; every parameter needs both bounds. Lets are optional, `: Real`
// annotations and `;` separators are optional, `//` starts a line comment.
// Syntax errors carry line:column positions.
Program parseProgram(const std::string& source);

Program parseProgramFile(const std::string& path);

}  // namespace approxcc

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qcl/codes.hpp"

namespace qcl {

// "re,im" or a bare real number.
cplx parse_complex(std::string_view token);
std::vector<cplx> parse_complex_row(std::string_view line);

// Code file format (blank lines and '#' comments ignored):
//
//   name: my_code
//   distance: 3            optional
//   stabilizer:
//     XZZXI
//     ...
//   logical_x: XXXXX       optional with stabilizer:
//   logical_z: ZZZZZ
//
// or, for a non-stabilizer code,
//
//   amplitudes:
//     <2^n re,im pairs for |0_L>>
//     <2^n re,im pairs for |1_L>>
CodeSpace parse_code(const std::string& text, const std::string& source = "<input>");
CodeSpace load_code_file(const std::string& path);

// Builtin name, or a path when it names a readable file.
CodeSpace resolve_code(const std::string& name_or_path);

std::string read_text_file(const std::string& path);

}  // namespace qcl

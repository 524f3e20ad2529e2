#ifndef SIT_TRANSLATE_HPP
#define SIT_TRANSLATE_HPP

#include <string>
#include <utility>
#include <vector>

#include "sit/core.hpp"

namespace sit {

/// A GADT-style declaration: every constructor carries a full Pi type that
/// ends in an instance of the data type.
struct GeneralData {
  std::string name;
  Telescope indices;
  std::vector<std::pair<std::string, Term>> ctors;
};

/// A plain row rewritten as the pattern row that binds every telescope
/// variable.
CtorRow as_pattern_row(const DataDecl& data, const CtorRow& row);

GeneralData to_general(const DataDecl& data);

/// Throws TypeError (unknown head) for an undeclared constructor.
Term synth_ctor_type(const Signature& sig, const std::string& ctor);

/// Deterministic Agda-flavoured rendering, one constructor per line.
std::string emit_general(const GeneralData& g);

}  // namespace sit

#endif  // SIT_TRANSLATE_HPP

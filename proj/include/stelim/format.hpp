#ifndef STELIM_FORMAT_HPP
#define STELIM_FORMAT_HPP

#include <span>
#include <string>
#include <string_view>

#include "stelim/expression.hpp"
#include "stelim/incremental.hpp"
#include "stelim/model.hpp"

namespace stelim {

/// Model document:
///   params p, q;
///   state i volatile;  state one reward 1;
///   init i;  target err;
///   i -> one : q;
/// States may also be introduced implicitly by a transition. `#` starts a
/// comment. Throws ParseError.
ModelInput parse_model(std::string_view text);

/// Diff document, expressions over `params`:
///   add state n [reward e];  remove state x;
///   set a -> b : e;  remove a -> b;  reward a : e;
///   volatile a, b;
/// The order of the volatile list is kept as a ranking hint.
Diff parse_diff(std::string_view text, std::span<const std::string> params);

std::string print_model(const ModelInput &model);
/// A preprocessed model printed as a document; parsing it back and
/// preprocessing again yields the same model.
std::string print_model(const Vpmc &model);
std::string print_diff(const Diff &diff, std::span<const std::string> params);
std::string print_cache(const EliminationCache &cache, const Pmc &names);

ModelInput as_input(const Vpmc &model);

}  // namespace stelim

#endif  // STELIM_FORMAT_HPP

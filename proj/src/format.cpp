#include "stelim/format.hpp"

#include <map>
#include <sstream>

#include "lexer.hpp"

namespace stelim {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

namespace {

using ParamMap = std::unordered_map<std::string, std::size_t>;

bool is_integer_token(const Token &t) { return t.kind == Tok::kNumber && t.text.find('.') == std::string::npos; }

bool is_name_token(const Token &t) { return t.kind == Tok::kIdent || is_integer_token(t); }

const Token &expect_name(TokenStream &ts, const char *what) {
  if (!is_name_token(ts.peek())) ts.fail_here(std::string("expected ") + what + " but found " + detail::describe(ts.peek()));
  return ts.next();
}

class ModelParser {
public:
  explicit ModelParser(std::string_view text) : ts_(detail::tokenize(text)) {}

  ModelInput run() {
    while (!ts_.at_end()) statement();
    const Token &end = ts_.peek();
    if (!init_) ts_.fail(ParseErrorKind::kInvalidModel, end, "missing 'init' declaration");
    if (targets_.empty()) ts_.fail(ParseErrorKind::kInvalidModel, end, "missing 'target' declaration");
    ModelInput out;
    auto resolve = [&](const Token &t) {
      auto s = pmc_.find(t.text);
      if (!s) ts_.fail(ParseErrorKind::kUnknownState, t, "unknown state '" + t.text + "'");
      return *s;
    };
    pmc_.set_initial(resolve(*init_));
    for (const Token &t : targets_) out.targets.insert(resolve(t));
    out.volatile_states = volatile_;
    out.pmc = std::move(pmc_);
    return out;
  }

private:
  TokenStream ts_;
  Pmc pmc_;
  ParamMap params_;
  bool params_seen_ = false;
  bool used_params_ = false;
  std::optional<Token> init_;
  std::vector<Token> targets_;
  StateSet volatile_;

  bool keyword(std::string_view w) const { return ts_.is_word(w) && !ts_.is_punct("->", 1); }

  void statement() {
    if (keyword("params")) return params();
    if (keyword("state")) return state();
    if (keyword("init")) {
      const Token kw = ts_.next();
      if (init_) ts_.fail(ParseErrorKind::kSyntax, kw, "duplicate 'init' declaration");
      init_ = expect_name(ts_, "a state name");
      ts_.expect_punct(";");
      return;
    }
    if (keyword("target")) {
      ts_.next();
      targets_.push_back(expect_name(ts_, "a state name"));
      while (ts_.is_punct(",")) {
        ts_.next();
        targets_.push_back(expect_name(ts_, "a state name"));
      }
      ts_.expect_punct(";");
      return;
    }
    if (is_name_token(ts_.peek()) && ts_.is_punct("->", 1)) return transition();
    ts_.fail_here("expected a statement but found " + detail::describe(ts_.peek()));
  }

  RationalFunction expression() {
    used_params_ = true;
    return detail::parse_expression(ts_, params_);
  }

  void params() {
    const Token kw = ts_.next();
    if (params_seen_) ts_.fail(ParseErrorKind::kSyntax, kw, "duplicate 'params' declaration");
    if (used_params_) ts_.fail(ParseErrorKind::kSyntax, kw, "'params' must precede every expression");
    params_seen_ = true;
    std::vector<std::string> names;
    if (!ts_.is_punct(";")) {
      while (true) {
        const Token &t = ts_.peek();
        if (t.kind != Tok::kIdent) ts_.fail_here("expected a parameter name but found " + detail::describe(t));
        ts_.next();
        if (!params_.emplace(t.text, names.size()).second)
          ts_.fail(ParseErrorKind::kSyntax, t, "duplicate parameter '" + t.text + "'");
        names.push_back(t.text);
        if (!ts_.is_punct(",")) break;
        ts_.next();
      }
    }
    ts_.expect_punct(";");
    pmc_.set_params(std::move(names));
  }

  StateId state_ref(const Token &t) {
    if (auto s = pmc_.find(t.text)) return *s;
    return pmc_.add_state(t.text);
  }

  void state() {
    ts_.next();
    const Token name = expect_name(ts_, "a state name");
    if (pmc_.find(name.text)) ts_.fail(ParseErrorKind::kDuplicateState, name, "state '" + name.text + "' already declared");
    const StateId s = pmc_.add_state(name.text);
    bool vol = false, rew = false;
    while (!ts_.is_punct(";")) {
      const Token &t = ts_.peek();
      if (ts_.is_word("volatile") && !vol) {
        ts_.next();
        vol = true;
        volatile_.insert(s);
      } else if (ts_.is_word("reward") && !rew) {
        ts_.next();
        rew = true;
        pmc_.set_reward(s, expression());
      } else {
        ts_.fail_here("expected 'volatile', 'reward' or ';' but found " + detail::describe(t));
      }
    }
    ts_.next();
  }

  void transition() {
    const Token from = ts_.next();
    ts_.expect_punct("->");
    const Token to = expect_name(ts_, "a state name");
    ts_.expect_punct(":");
    const Token at = ts_.peek();
    RationalFunction value = expression();
    ts_.expect_punct(";");
    const StateId a = state_ref(from), b = state_ref(to);
    if (pmc_.entry(a, b))
      ts_.fail(ParseErrorKind::kDuplicateTransition, from, "duplicate transition " + from.text + " -> " + to.text);
    if (value.is_zero())
      ts_.fail(ParseErrorKind::kZeroTransition, at, "transition " + from.text + " -> " + to.text + " is identically zero");
    pmc_.set(a, b, std::move(value));
  }
};

class DiffParser {
public:
  DiffParser(std::string_view text, std::span<const std::string> params) : ts_(detail::tokenize(text)) {
    for (std::size_t i = 0; i < params.size(); ++i) params_.emplace(params[i], i);
  }

  Diff run() {
    while (!ts_.at_end()) statement();
    return std::move(diff_);
  }

private:
  TokenStream ts_;
  ParamMap params_;
  Diff diff_;

  void statement() {
    const Token kw = ts_.peek();
    if (ts_.is_word("add")) {
      ts_.next();
      expect_word("state");
      Diff::AddedState a{expect_name(ts_, "a state name").text, std::nullopt};
      if (ts_.is_word("reward")) {
        ts_.next();
        a.reward = detail::parse_expression(ts_, params_);
      }
      diff_.added_states.push_back(std::move(a));
    } else if (ts_.is_word("remove")) {
      ts_.next();
      if (ts_.is_word("state") && !ts_.is_punct("->", 1)) {
        ts_.next();
        diff_.removed_states.push_back(expect_name(ts_, "a state name").text);
      } else {
        const std::string from = expect_name(ts_, "a state name").text;
        ts_.expect_punct("->");
        diff_.set_transitions.push_back({from, expect_name(ts_, "a state name").text, RationalFunction()});
      }
    } else if (ts_.is_word("set")) {
      ts_.next();
      const std::string from = expect_name(ts_, "a state name").text;
      ts_.expect_punct("->");
      const std::string to = expect_name(ts_, "a state name").text;
      ts_.expect_punct(":");
      diff_.set_transitions.push_back({from, to, detail::parse_expression(ts_, params_)});
    } else if (ts_.is_word("reward")) {
      ts_.next();
      const std::string s = expect_name(ts_, "a state name").text;
      ts_.expect_punct(":");
      diff_.set_rewards.emplace_back(s, detail::parse_expression(ts_, params_));
    } else if (ts_.is_word("volatile")) {
      ts_.next();
      if (diff_.next_volatile) ts_.fail(ParseErrorKind::kSyntax, kw, "duplicate 'volatile' statement");
      std::vector<std::string> names;
      if (!ts_.is_punct(";")) {
        names.push_back(expect_name(ts_, "a state name").text);
        while (ts_.is_punct(",")) {
          ts_.next();
          names.push_back(expect_name(ts_, "a state name").text);
        }
      }
      diff_.next_volatile = std::move(names);
    } else {
      ts_.fail_here("expected 'add', 'remove', 'set', 'reward' or 'volatile' but found " + detail::describe(kw));
    }
    ts_.expect_punct(";");
  }

  void expect_word(std::string_view w) {
    if (!ts_.is_word(w)) ts_.fail_here("expected '" + std::string(w) + "' but found " + detail::describe(ts_.peek()));
    ts_.next();
  }
};

}  // namespace

ModelInput parse_model(std::string_view text) { return ModelParser(text).run(); }

Diff parse_diff(std::string_view text, std::span<const std::string> params) { return DiffParser(text, params).run(); }

std::string print_model(const ModelInput &model) {
  const Pmc &pmc = model.pmc;
  const auto &names = pmc.params();
  std::ostringstream os;
  os << "params";
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : " ") << names[i];
  os << ";\n";
  for (StateId s : pmc.states()) {
    os << "state " << pmc.name(s);
    if (model.volatile_states.count(s)) os << " volatile";
    if (!pmc.reward(s).is_zero()) os << " reward " << pmc.reward(s).to_string(names);
    os << ";\n";
  }
  if (pmc.initial() != kNoState) os << "init " << pmc.name(pmc.initial()) << ";\n";
  if (!model.targets.empty()) {
    os << "target";
    bool first = true;
    for (StateId t : model.targets) {
      os << (first ? " " : ", ") << pmc.name(t);
      first = false;
    }
    os << ";\n";
  }
  for (StateId s : pmc.states())
    for (const auto &[t, value] : pmc.successors(s))
      os << pmc.name(s) << " -> " << pmc.name(t) << " : " << value.to_string(names) << ";\n";
  return os.str();
}

ModelInput as_input(const Vpmc &model) { return ModelInput{model.pmc, {model.target}, model.volatile_states}; }

std::string print_model(const Vpmc &model) { return print_model(as_input(model)); }

std::string print_diff(const Diff &diff, std::span<const std::string> params) {
  std::ostringstream os;
  for (const auto &s : diff.removed_states) os << "remove state " << s << ";\n";
  for (const auto &a : diff.added_states) {
    os << "add state " << a.name;
    if (a.reward) os << " reward " << a.reward->to_string(params);
    os << ";\n";
  }
  for (const auto &t : diff.set_transitions) {
    if (t.value.is_zero())
      os << "remove " << t.from << " -> " << t.to << ";\n";
    else
      os << "set " << t.from << " -> " << t.to << " : " << t.value.to_string(params) << ";\n";
  }
  for (const auto &[s, r] : diff.set_rewards) os << "reward " << s << " : " << r.to_string(params) << ";\n";
  if (diff.next_volatile) {
    os << "volatile";
    for (std::size_t i = 0; i < diff.next_volatile->size(); ++i) os << (i ? ", " : " ") << (*diff.next_volatile)[i];
    os << ";\n";
  }
  return os.str();
}

std::string print_cache(const EliminationCache &cache, const Pmc &pmc) {
  const auto &names = pmc.params();
  std::ostringstream os;
  auto n = [&](StateId s) { return pmc.contains(s) ? pmc.name(s) : "#" + std::to_string(s); };
  os << "order";
  for (StateId s : cache.order.sequence()) os << ' ' << n(s);
  os << '\n';
  for (const auto &[k, v] : cache.partial) os << "partial " << n(k.first) << " -> " << n(k.second) << " : " << v.to_string(names) << '\n';
  for (const auto &[k, v] : cache.map)
    os << "map " << n(std::get<0>(k)) << " : " << n(std::get<1>(k)) << " -> " << n(std::get<2>(k)) << " : "
       << v.to_string(names) << '\n';
  for (const auto &[s, v] : cache.partial_reward) os << "partial_reward " << n(s) << " : " << v.to_string(names) << '\n';
  for (const auto &[k, v] : cache.reward_map)
    os << "reward_map " << n(k.first) << " : " << n(k.second) << " : " << v.to_string(names) << '\n';
  return os.str();
}

}  // namespace stelim

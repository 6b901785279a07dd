#pragma once

// Reading and writing fuzzy systems in the FML markup dialect
// (fuzzySystem / knowledgeBase / fuzzyVariable / fuzzyTerm / trapezoidShape /
// mamdaniRuleBase / rule / antecedent / consequent / clause).

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <array>
#include <charconv>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "fdaa/fml/model.hpp"

namespace fdaa::fml {

namespace detail {

using boost::property_tree::ptree;

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline const ptree* attributes(const ptree& node) {
  auto it = node.find("<xmlattr>");
  return it == node.not_found() ? nullptr : &it->second;
}

inline std::optional<std::string> attr(const ptree& node, const std::string& key) {
  if (const auto* a = attributes(node)) {
    auto it = a->find(key);
    if (it != a->not_found()) return it->second.data();
  }
  return std::nullopt;
}

inline double parse_number(const std::string& text, const std::string& where) {
  const auto t = trim(text);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty())
    throw FmlError(where + ": '" + t + "' is not a number");
  return value;
}

inline double number_attr(const ptree& node, const std::string& key, const std::string& where,
                          std::optional<double> fallback = std::nullopt) {
  auto v = attr(node, key);
  if (!v) {
    if (fallback) return *fallback;
    throw FmlError(where + ": missing attribute '" + key + "'");
  }
  return parse_number(*v, where + " attribute '" + key + "'");
}

inline bool is_meta(const std::string& key) { return key == "<xmlattr>" || key == "<xmlcomment>"; }

inline FuzzyTerm parse_term(const ptree& node, const std::string& var_name) {
  FuzzyTerm term;
  const auto name = attr(node, "name");
  if (!name || name->empty()) throw FmlError("variable '" + var_name + "': fuzzyTerm without a name");
  term.name = *name;
  const std::string where = "variable '" + var_name + "' term '" + term.name + "'";
  term.complement = lower(attr(node, "complement").value_or("false")) == "true";

  bool have_shape = false;
  for (const auto& [key, child] : node) {
    if (is_meta(key)) continue;
    if (key != "trapezoidShape")
      throw FmlError(where + ": unsupported shape element '" + key +
                     "' (only trapezoidShape is supported)");
    if (have_shape) throw FmlError(where + ": more than one shape element");
    have_shape = true;
    term.mf.a = number_attr(child, "param1", where);
    term.mf.b = number_attr(child, "param2", where);
    term.mf.c = number_attr(child, "param3", where);
    term.mf.d = number_attr(child, "param4", where);
  }
  if (!have_shape) throw FmlError(where + ": missing shape element");
  return term;
}

inline FuzzyVariable parse_variable(const ptree& node) {
  FuzzyVariable v;
  const auto name = attr(node, "name");
  if (!name || name->empty()) throw FmlError("fuzzyVariable without a name");
  v.name = *name;
  const std::string where = "variable '" + v.name + "'";
  v.scale = attr(node, "scale").value_or("");
  v.domain_left = number_attr(node, "domainleft", where);
  v.domain_right = number_attr(node, "domainright", where);
  const auto type = lower(attr(node, "type").value_or("input"));
  if (type == "input") {
    v.type = VariableType::input;
  } else if (type == "output") {
    v.type = VariableType::output;
  } else {
    throw FmlError(where + ": unknown type '" + type + "'");
  }
  v.accumulation = attr(node, "accumulation").value_or("MAX");
  v.defuzzifier = attr(node, "defuzzifier").value_or("COG");
  if (lower(v.accumulation) != "max")
    throw FmlError(where + ": unsupported accumulation '" + v.accumulation + "'");
  if (lower(v.defuzzifier) != "cog")
    throw FmlError(where + ": unsupported defuzzifier '" + v.defuzzifier + "'");
  v.default_value = number_attr(node, "defaultValue", where, 0.0);
  v.network_address = attr(node, "networkAddress").value_or("");
  for (const auto& [key, child] : node) {
    if (is_meta(key)) continue;
    if (key != "fuzzyTerm") throw FmlError(where + ": unexpected element '" + key + "'");
    v.terms.push_back(parse_term(child, v.name));
  }
  return v;
}

inline RuleClause parse_clause(const ptree& node, const std::string& where) {
  RuleClause clause;
  auto var = node.get_child_optional("variable");
  auto term = node.get_child_optional("term");
  if (!var || !term) throw FmlError(where + ": clause needs <variable> and <term>");
  clause.variable = trim(var->data());
  clause.term = trim(term->data());
  return clause;
}

inline std::vector<RuleClause> parse_clauses(const ptree& node, const std::string& where) {
  std::vector<RuleClause> out;
  for (const auto& [key, child] : node) {
    if (is_meta(key)) continue;
    if (key == "clause") {
      out.push_back(parse_clause(child, where));
    } else if (key == "then") {
      auto nested = parse_clauses(child, where);
      out.insert(out.end(), nested.begin(), nested.end());
    } else {
      throw FmlError(where + ": unexpected element '" + key + "'");
    }
  }
  return out;
}

inline FuzzyRule parse_rule(const ptree& node) {
  FuzzyRule rule;
  rule.name = attr(node, "name").value_or("");
  if (rule.name.empty()) throw FmlError("rule without a name");
  const std::string where = "rule '" + rule.name + "'";
  rule.and_method = attr(node, "andMethod").value_or("MIN");
  rule.or_method = attr(node, "orMethod").value_or("MAX");
  if (lower(rule.and_method) != "min") throw FmlError(where + ": unsupported andMethod '" + rule.and_method + "'");
  if (lower(rule.or_method) != "max") throw FmlError(where + ": unsupported orMethod '" + rule.or_method + "'");
  const auto connector = lower(attr(node, "connector").value_or("and"));
  if (connector == "and") {
    rule.connector = Connector::and_;
  } else if (connector == "or") {
    rule.connector = Connector::or_;
  } else {
    throw FmlError(where + ": unknown connector '" + connector + "'");
  }
  rule.weight = number_attr(node, "weight", where, 1.0);
  rule.network_address = attr(node, "networkAddress").value_or("");
  for (const auto& [key, child] : node) {
    if (is_meta(key)) continue;
    if (key == "antecedent") {
      rule.antecedent = parse_clauses(child, where + " antecedent");
    } else if (key == "consequent") {
      rule.consequent = parse_clauses(child, where + " consequent");
    } else {
      throw FmlError(where + ": unexpected element '" + key + "'");
    }
  }
  return rule;
}

inline std::string format_number(double x, bool force_decimal = false) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  std::string out(buf.data(), ptr);
  if (force_decimal && out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

inline void write_clause(std::ostream& os, const RuleClause& c, const std::string& indent) {
  os << indent << "<clause>\n"
     << indent << "  <variable>" << escape(c.variable) << "</variable>\n"
     << indent << "  <term>" << escape(c.term) << "</term>\n"
     << indent << "</clause>\n";
}

}  // namespace detail

inline FuzzySystem parse_fml(std::string_view document) {
  using detail::ptree;
  ptree tree;
  try {
    std::istringstream in{std::string(document)};
    boost::property_tree::read_xml(in, tree, boost::property_tree::xml_parser::trim_whitespace);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw FmlError(std::string("malformed FML markup: ") + e.what());
  }

  auto root_it = tree.find("fuzzySystem");
  if (root_it == tree.not_found()) throw FmlError("missing top-level fuzzySystem element");
  const ptree& root = root_it->second;

  FuzzySystem system;
  system.name = detail::attr(root, "name").value_or("");
  system.network_address = detail::attr(root, "networkAddress").value_or("");

  bool have_kb = false;
  bool have_rb = false;
  for (const auto& [key, child] : root) {
    if (detail::is_meta(key)) continue;
    if (key == "knowledgeBase") {
      if (have_kb) throw FmlError("more than one knowledgeBase element");
      have_kb = true;
      system.kb_network_address = detail::attr(child, "networkAddress").value_or("");
      for (const auto& [vkey, vnode] : child) {
        if (detail::is_meta(vkey)) continue;
        if (vkey != "fuzzyVariable")
          throw FmlError("unsupported knowledgeBase element '" + vkey + "' (only fuzzyVariable)");
        system.knowledge_base.push_back(detail::parse_variable(vnode));
      }
    } else if (key == "mamdaniRuleBase") {
      if (have_rb) throw FmlError("more than one rule base element");
      have_rb = true;
      auto& rb = system.rule_base;
      rb.name = detail::attr(child, "name").value_or("");
      rb.activation_method = detail::attr(child, "activationMethod").value_or("MIN");
      rb.and_method = detail::attr(child, "andMethod").value_or("MIN");
      rb.or_method = detail::attr(child, "orMethod").value_or("MAX");
      rb.network_address = detail::attr(child, "networkAddress").value_or("");
      if (detail::lower(rb.activation_method) != "min")
        throw FmlError("unsupported activationMethod '" + rb.activation_method + "'");
      for (const auto& [rkey, rnode] : child) {
        if (detail::is_meta(rkey)) continue;
        if (rkey != "rule") throw FmlError("unexpected rule base element '" + rkey + "'");
        rb.rules.push_back(detail::parse_rule(rnode));
      }
    } else {
      throw FmlError("unsupported fuzzySystem element '" + key + "'");
    }
  }
  if (!have_kb) throw FmlError("missing knowledgeBase element");
  validate(system);
  return system;
}

inline std::string serialize_fml(const FuzzySystem& system) {
  using detail::escape;
  using detail::format_number;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<fuzzySystem xmlns=\"http://www.ieee1855.org\" name=\"" << escape(system.name)
     << "\" networkAddress=\"" << escape(system.network_address) << "\">\n";
  os << "  <knowledgeBase networkAddress=\"" << escape(system.kb_network_address) << "\">\n";
  for (const auto& v : system.knowledge_base) {
    os << "    <fuzzyVariable name=\"" << escape(v.name) << "\" scale=\"" << escape(v.scale)
       << "\" domainleft=\"" << format_number(v.domain_left) << "\" domainright=\""
       << format_number(v.domain_right) << "\" type=\""
       << (v.type == VariableType::input ? "Input" : "Output") << "\" accumulation=\""
       << escape(v.accumulation) << "\" defuzzifier=\"" << escape(v.defuzzifier)
       << "\" defaultValue=\"" << format_number(v.default_value, true) << "\" networkAddress=\""
       << escape(v.network_address) << "\">\n";
    for (const auto& t : v.terms) {
      os << "      <fuzzyTerm name=\"" << escape(t.name) << "\" complement=\""
         << (t.complement ? "true" : "false") << "\">\n";
      os << "        <trapezoidShape param1=\"" << format_number(t.mf.a) << "\" param2=\""
         << format_number(t.mf.b) << "\" param3=\"" << format_number(t.mf.c) << "\" param4=\""
         << format_number(t.mf.d) << "\"/>\n";
      os << "      </fuzzyTerm>\n";
    }
    os << "    </fuzzyVariable>\n";
  }
  os << "  </knowledgeBase>\n";
  const auto& rb = system.rule_base;
  os << "  <mamdaniRuleBase name=\"" << escape(rb.name) << "\" activationMethod=\""
     << escape(rb.activation_method) << "\" andMethod=\"" << escape(rb.and_method)
     << "\" orMethod=\"" << escape(rb.or_method) << "\" networkAddress=\""
     << escape(rb.network_address) << "\">\n";
  for (const auto& r : rb.rules) {
    os << "    <rule name=\"" << escape(r.name) << "\" andMethod=\"" << escape(r.and_method)
       << "\" orMethod=\"" << escape(r.or_method) << "\" connector=\""
       << (r.connector == Connector::and_ ? "AND" : "OR") << "\" weight=\""
       << format_number(r.weight, true) << "\" networkAddress=\"" << escape(r.network_address)
       << "\">\n";
    os << "      <antecedent>\n";
    for (const auto& c : r.antecedent) detail::write_clause(os, c, "        ");
    os << "      </antecedent>\n";
    os << "      <consequent>\n        <then>\n";
    for (const auto& c : r.consequent) detail::write_clause(os, c, "          ");
    os << "        </then>\n      </consequent>\n";
    os << "    </rule>\n";
  }
  os << "  </mamdaniRuleBase>\n";
  os << "</fuzzySystem>\n";
  return os.str();
}

inline FuzzySystem load_fml(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FmlError("cannot open FML file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fml(buf.str());
}

}  // namespace fdaa::fml

#include "gwn/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gwn {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& value) {
  if (s.empty()) return false;
  char* end = nullptr;
  value = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

PointData make_point_data(const std::vector<std::vector<double>>& rows, std::vector<std::string> names) {
  if (rows.empty()) throw IoError("point file contains no points");
  const std::size_t n = rows.front().size();
  if (n == 0) throw IoError("points have no coordinates");
  for (std::size_t j = 0; j < rows.size(); ++j)
    if (rows[j].size() != n)
      throw DimensionMismatch("point " + std::to_string(j + 1) + " has " + std::to_string(rows[j].size()) +
                              " coordinates, expected " + std::to_string(n));
  if (names.empty()) names = default_variable_names(n);
  if (names.size() != n) throw DimensionMismatch("header names do not match the number of coordinates");
  return {PointSetd(rows), std::move(names)};
}

std::string term_name(const Term& t, const std::vector<std::string>& names) { return to_string(t, names); }

json term_to_json(const Term& t) { return t.exponents(); }

Term term_from_json(const json& j, std::size_t n) {
  auto e = j.get<std::vector<int>>();
  if (e.size() != n) throw IoError("term exponent vector has the wrong length");
  return Term(std::move(e));
}

std::string sig4(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

PointData parse_points_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> names;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const char sep = t.find(',') != std::string::npos ? ',' : (t.find(';') != std::string::npos ? ';' : ' ');
    std::vector<std::string> cells = split(t, sep);
    if (sep == ' ') std::erase_if(cells, [](const std::string& c) { return c.empty(); });
    std::vector<double> row;
    bool numeric = true;
    for (const auto& c : cells) {
      double v;
      if (!parse_double(c, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty() && names.empty()) {
        names = cells;
        continue;
      }
      throw IoError("line " + std::to_string(lineno) + ": malformed number");
    }
    rows.push_back(std::move(row));
  }
  return make_point_data(rows, std::move(names));
}

PointData parse_points_json(const json& j) {
  try {
    std::vector<std::string> names;
    const json* pts = &j;
    if (j.is_object()) {
      if (!j.contains("points")) throw IoError("JSON point file needs a \"points\" array");
      pts = &j.at("points");
      if (j.contains("variables")) names = j.at("variables").get<std::vector<std::string>>();
    }
    return make_point_data(pts->get<std::vector<std::vector<double>>>(), std::move(names));
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON point file: ") + e.what());
  }
}

PointData read_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::string head = trim(text.substr(0, 64));
  if (path.extension() == ".json" || (!head.empty() && (head[0] == '[' || head[0] == '{'))) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
    return parse_points_json(j);
  }
  std::istringstream is(text);
  return parse_points_csv(is);
}

void write_points_csv(std::ostream& out, const PointSetd& X, const std::vector<std::string>& names) {
  for (std::size_t k = 0; k < names.size(); ++k) out << (k ? "," : "") << names[k];
  if (!names.empty()) out << '\n';
  char buf[40];
  for (Eigen::Index j = 0; j < X.size(); ++j) {
    for (Eigen::Index k = 0; k < X.matrix().cols(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", X.matrix()(j, k));
      out << (k ? "," : "") << buf;
    }
    out << '\n';
  }
}

TermOrdering parse_ordering(const std::string& spec, const std::vector<std::string>& names) {
  const auto colon = spec.find(':');
  const std::string kind = trim(spec.substr(0, colon));
  OrderingKind k;
  if (kind == "degrevlex")
    k = OrderingKind::degrevlex;
  else if (kind == "deglex")
    k = OrderingKind::deglex;
  else
    throw std::invalid_argument("unknown term ordering '" + kind + "' (use degrevlex or deglex)");

  std::vector<std::size_t> precedence(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) precedence[i] = i;
  if (colon != std::string::npos) {
    const auto listed = split(spec.substr(colon + 1), ',');
    if (listed.size() != names.size())
      throw std::invalid_argument("ordering lists " + std::to_string(listed.size()) + " variables, data has " +
                                  std::to_string(names.size()));
    for (std::size_t i = 0; i < listed.size(); ++i) {
      auto it = std::find(names.begin(), names.end(), listed[i]);
      if (it == names.end()) throw std::invalid_argument("ordering names unknown variable '" + listed[i] + "'");
      precedence[i] = static_cast<std::size_t>(it - names.begin());
    }
  }
  return TermOrdering(k, std::move(precedence));
}

std::string ordering_to_string(const TermOrdering& ord, const std::vector<std::string>& names) {
  std::string out = ord.kind() == OrderingKind::degrevlex ? "degrevlex:" : "deglex:";
  for (std::size_t i = 0; i < ord.precedence().size(); ++i) out += (i ? "," : "") + names.at(ord.precedence()[i]);
  return out;
}

json basis_to_json(const BasisResult& r, const std::vector<std::string>& names) {
  json j;
  j["format"] = "gwn-basis";
  j["version"] = 1;
  j["algorithm"] = to_string(r.algorithm);
  j["normalization"] = to_string(r.normalization);
  j["eps"] = r.eps;
  if (r.algorithm == Algorithm::avi) j["tau"] = r.tau;
  j["variables"] = names;
  j["ordering"] = {{"kind", r.ordering.kind() == OrderingKind::degrevlex ? "degrevlex" : "deglex"},
                   {"precedence", r.ordering.precedence()}};
  j["order_ideal"] = json::array();
  for (const Term& t : r.O) j["order_ideal"].push_back(term_to_json(t));
  j["basis"] = json::array();
  for (const auto& g : r.G) {
    json p;
    p["border_term"] = term_to_json(g.border_term);
    p["terms"] = json::array();
    p["coefficients"] = json::array();
    for (const auto& [t, c] : g.poly.coefficients()) {
      p["terms"].push_back(term_to_json(t));
      p["coefficients"].push_back(c);
    }
    p["extent"] = g.extent;
    p["exact"] = g.exact;
    p["normalized"] = g.normalized;
    j["basis"].push_back(std::move(p));
  }
  j["diagnostics"] = json::array();
  for (const auto& s : r.diagnostics)
    j["diagnostics"].push_back({{"degree", s.degree},
                                {"trial", term_to_json(s.trial)},
                                {"lambda", s.lambda},
                                {"sqrt_lambda", s.sqrt_lambda},
                                {"decision", s.decision == Decision::appended_to_basis ? "basis" : "order_ideal"},
                                {"exact", s.exact},
                                {"tie_multiplicity", s.tie_multiplicity},
                                {"spectrum", s.spectrum}});
  j["warnings"] = r.warnings;
  return j;
}

BasisResult basis_from_json(const json& j, std::vector<std::string>* names_out) {
  try {
    const auto names = j.at("variables").get<std::vector<std::string>>();
    const std::size_t n = names.size();
    if (n == 0) throw IoError("basis file declares no variables");
    const auto& o = j.at("ordering");
    const std::string kind = o.at("kind").get<std::string>();
    TermOrdering ord(kind == "deglex" ? OrderingKind::deglex : OrderingKind::degrevlex,
                     o.at("precedence").get<std::vector<std::size_t>>());
    if (ord.dimension() != n) throw IoError("ordering dimension does not match the variables");

    BasisResult r(n, ord);
    r.algorithm = j.at("algorithm").get<std::string>() == "avi" ? Algorithm::avi : Algorithm::abm;
    r.normalization = j.at("normalization").get<std::string>() == "coefficient" ? Normalization::coefficient
                                                                               : Normalization::gradient_weighted;
    r.eps = j.at("eps").get<double>();
    r.tau = j.value("tau", 0.0);
    for (const auto& t : j.at("order_ideal")) r.O.push_back(term_from_json(t, n));
    for (const auto& p : j.at("basis")) {
      BasisPolynomial g;
      g.border_term = term_from_json(p.at("border_term"), n);
      const auto& terms = p.at("terms");
      const auto& coeffs = p.at("coefficients");
      if (terms.size() != coeffs.size()) throw IoError("basis polynomial has mismatched terms and coefficients");
      Polynomiald::Coefficients c;
      for (std::size_t i = 0; i < terms.size(); ++i) c[term_from_json(terms[i], n)] += coeffs[i].get<double>();
      g.poly = Polynomiald(n, std::move(c));
      g.extent = p.value("extent", 0.0);
      g.exact = p.value("exact", false);
      g.normalized = p.value("normalized", true);
      r.G.push_back(std::move(g));
    }
    if (j.contains("diagnostics"))
      for (const auto& s : j.at("diagnostics")) {
        DiagnosticStep d;
        d.degree = s.at("degree").get<int>();
        d.trial = term_from_json(s.at("trial"), n);
        d.lambda = s.at("lambda").get<double>();
        d.sqrt_lambda = s.at("sqrt_lambda").get<double>();
        d.decision = s.at("decision").get<std::string>() == "basis" ? Decision::appended_to_basis
                                                                    : Decision::appended_to_order_ideal;
        d.exact = s.value("exact", false);
        d.tie_multiplicity = s.value("tie_multiplicity", 1);
        d.spectrum = s.value("spectrum", std::vector<double>{});
        r.diagnostics.push_back(std::move(d));
      }
    if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (names_out) *names_out = names;
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed basis file: ") + e.what());
  }
}

BasisResult read_basis(const std::filesystem::path& path, std::vector<std::string>* names) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return basis_from_json(j, names);
}

void write_basis(const std::filesystem::path& path, const BasisResult& result, const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << basis_to_json(result, names).dump(2) << '\n';
}

std::string basis_summary(const BasisResult& r, const std::vector<std::string>& names, bool trace) {
  std::string out;
  out += "algorithm " + to_string(r.algorithm) + ", normalization " + to_string(r.normalization) + ", eps " +
         sig4(r.eps) + ", ordering " + ordering_to_string(r.ordering, names) + "\n";
  out += "O = [";
  for (std::size_t i = 0; i < r.O.size(); ++i) out += (i ? ", " : "") + term_name(r.O[i], names);
  out += "]\n";
  out += is_order_ideal(r.O) ? "O is an order ideal\n" : "O is NOT an order ideal\n";
  out += "G (" + std::to_string(r.G.size()) + " polynomials):\n";
  for (const auto& g : r.G) {
    out += "  g_" + term_name(g.border_term, names) + " = " + to_string(g.poly, r.ordering, names, 4);
    out += "    extent " + sig4(g.extent);
    if (g.exact) out += " (exact)";
    if (!g.normalized) out += " (unnormalized)";
    out += "\n";
  }
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  if (trace) {
    out += "steps:\n";
    for (const auto& s : r.diagnostics) {
      out += "  degree " + std::to_string(s.degree) + "  trial " + term_name(s.trial, names) + "  sqrt(lambda) " +
             sig4(s.sqrt_lambda) + "  -> " + (s.decision == Decision::appended_to_basis ? "G" : "O");
      if (s.exact) out += " (exact)";
      if (s.tie_multiplicity > 1) out += " (tie x" + std::to_string(s.tie_multiplicity) + ")";
      if (!s.spectrum.empty()) {
        out += "  spectrum";
        for (double l : s.spectrum) out += " " + sig4(l);
      }
      out += "\n";
    }
  }
  return out;
}

std::string verification_summary(const VerificationReport& rep) {
  auto flag = [](bool b) { return b ? "ok" : "FAILED"; };
  std::string out;
  out += std::string("connected to 1:            ") + flag(rep.connected_to_1) + "\n";
  out += std::string("order ideal:               ") + (rep.order_ideal ? "yes" : "no") + "\n";
  out += std::string("normalization:             ") + flag(rep.normalization_ok) + "\n";
  out += std::string("eps-vanishing:             ") + flag(rep.vanishing_ok) + "\n";
  out += std::string("O-supported non-vanishing: ") + flag(rep.order_ideal_non_vanishing) + "\n";
  out += std::string("border correspondence:     ") + flag(rep.border_correspondence) + "\n";
  for (const auto& v : rep.violations) out += "  violation: " + v + "\n";
  out += rep.passed() ? "PASSED\n" : "FAILED\n";
  return out;
}

}  // namespace gwn

#include "arrival/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string join_args(const std::vector<std::string>& args) {
  std::string out;
  for (const auto& a : args) {
    if (a.find_first_of(" \t\n") != std::string::npos) throw ConfigurationError("argument contains whitespace: " + a);
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_exact(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void RunManifest::set(const std::string& key, const std::string& value) {
  for (auto& kv : params)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  params.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, double value) { set(key, format_number(value)); }

std::string RunManifest::header() const {
  std::ostringstream os;
  os << "# tool = arrival " << version << '\n';
  os << "# subcommand = " << subcommand << '\n';
  os << "# args = " << join_args(args) << '\n';
  for (const auto& [k, v] : params) os << "# " << k << " = " << v << '\n';
  return os.str();
}

RunManifest RunManifest::parse(const std::string& text) {
  RunManifest m;
  m.version.clear();
  std::istringstream in(text);
  std::string line;
  bool have_args = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '#') break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(1, eq - 1));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "tool") {
      const auto sp = value.find(' ');
      m.version = sp == std::string::npos ? "" : value.substr(sp + 1);
    } else if (key == "subcommand") {
      m.subcommand = value;
    } else if (key == "args") {
      std::istringstream words(value);
      std::string w;
      while (words >> w) m.args.push_back(w);
      have_args = true;
    } else {
      m.params.emplace_back(key, value);
    }
  }
  if (!have_args || m.args.empty()) throw ConfigurationError("manifest has no args line");
  return m;
}

RunManifest RunManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open manifest " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void write_csv(std::ostream& out, const RunManifest& manifest, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::string col;
  for (std::size_t i = 0; i < columns.size(); ++i) col += (i ? "," : "") + columns[i];
  std::vector<std::string> lines;
  lines.reserve(rows.size());
  for (const auto& r : rows) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + format_number(r[i]);
    lines.push_back(std::move(s));
  }
  write_csv(out, manifest, col, lines);
}

void write_csv(std::ostream& out, const RunManifest& manifest, const std::string& column_row,
               const std::vector<std::string>& rows) {
  out << manifest.header() << column_row << '\n';
  for (const auto& r : rows) out << r << '\n';
}

}  // namespace arrival

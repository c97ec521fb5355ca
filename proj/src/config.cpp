#include "parasemi/config.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "parasemi/error.hpp"
#include "parasemi/io.hpp"

namespace parasemi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace

Config Config::parse_text(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::parse, "line " + std::to_string(n) + ": expected key = value", line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::parse, "line " + std::to_string(n) + ": empty key");
    if (c.raw_.count(key)) throw Error(ErrorKind::parse, "duplicate key '" + key + "'", key);
    c.set(key, value);
  }
  return c;
}

Config Config::from_file(const std::filesystem::path& file) {
  const std::string text = read_text_file(file);
  if (file.extension() != ".json") return parse_text(text);
  Config c;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& cfg = j.at("config");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      if (!it.value().is_string())
        throw Error(ErrorKind::parse, "manifest value for '" + it.key() + "' is not a string", it.key());
      c.set(it.key(), it.value().get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed manifest: ") + e.what(), file.string());
  }
  return c;
}

void Config::set(const std::string& key, const std::string& value) {
  raw_[key] = value;
  resolved_[key] = value;
}

const std::string* Config::lookup(const std::string& key) {
  auto it = raw_.find(key);
  return it == raw_.end() ? nullptr : &it->second;
}

double Config::get_double(const std::string& key, double def) {
  if (const std::string* v = lookup(key)) {
    try {
      std::size_t used = 0;
      const double x = std::stod(*v, &used);
      if (used != v->size()) throw std::invalid_argument(*v);
      return x;
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, "key '" + key + "' expects a number, got '" + *v + "'", key);
    }
  }
  resolved_[key] = format_double(def);
  return def;
}

long Config::get_int(const std::string& key, long def) {
  if (const std::string* v = lookup(key)) {
    try {
      std::size_t used = 0;
      const long x = std::stol(*v, &used);
      if (used != v->size()) throw std::invalid_argument(*v);
      return x;
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, "key '" + key + "' expects an integer, got '" + *v + "'", key);
    }
  }
  resolved_[key] = std::to_string(def);
  return def;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t def) {
  if (const std::string* v = lookup(key)) {
    try {
      std::size_t used = 0;
      if (!v->empty() && (*v)[0] == '-') throw std::invalid_argument(*v);
      const std::uint64_t x = std::stoull(*v, &used);
      if (used != v->size()) throw std::invalid_argument(*v);
      return x;
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, "key '" + key + "' expects an unsigned integer, got '" + *v + "'", key);
    }
  }
  resolved_[key] = std::to_string(def);
  return def;
}

std::string Config::get_string(const std::string& key, const std::string& def) {
  if (const std::string* v = lookup(key)) return *v;
  resolved_[key] = def;
  return def;
}

std::vector<double> Config::get_vec(const std::string& key, const std::vector<double>& def) {
  const std::string* v = lookup(key);
  if (!v) {
    resolved_[key] = join(def);
    return def;
  }
  std::vector<double> out;
  std::istringstream in(*v);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    cell = trim(cell);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, "key '" + key + "' expects a comma-separated list of numbers", key);
    }
  }
  return out;
}

bool Config::get_bool(const std::string& key, bool def) {
  if (const std::string* v = lookup(key)) {
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw Error(ErrorKind::parse, "key '" + key + "' expects true or false", key);
  }
  resolved_[key] = def ? "true" : "false";
  return def;
}

void Config::restrict_to(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : raw_)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw Error(ErrorKind::parse, "unknown configuration key '" + k + "'", k);
}

}  // namespace parasemi

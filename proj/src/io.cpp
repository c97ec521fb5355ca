#include "parasemi/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "parasemi/error.hpp"

namespace parasemi {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string path_to_csv(const PathSample& p) {
  std::string out = "t";
  for (std::size_t k = 0; k < p.dim(); ++k) out += ",c_" + std::to_string(k + 1);
  out += '\n';
  for (std::size_t j = 0; j < p.size(); ++j) {
    out += format_double(p.grid()[j]);
    for (double v : p.value(j)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

PathSample path_from_csv(const std::string& text, const Vec& weights) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse, "empty CSV");
  std::size_t cols = 1;
  for (char c : line) cols += c == ',';
  if (cols < 2 || line.rfind("t", 0) != 0) throw Error(ErrorKind::parse, "CSV header must be t,c_1,...");
  const std::size_t N = cols - 1;
  Vec t, data;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      double v;
      try {
        std::size_t used = 0;
        v = std::stod(cell, &used);
        if (used != cell.size() && cell.find_first_not_of(" \r", used) != std::string::npos)
          throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorKind::parse, "bad number on CSV row " + std::to_string(row));
      }
      (c == 0 ? t : data).push_back(v);
      ++c;
    }
    if (c != cols) throw Error(ErrorKind::parse, "wrong column count on CSV row " + std::to_string(row));
  }
  Vec w = weights.empty() ? Vec(N, 1.0) : weights;
  if (w.size() != N) throw Error(ErrorKind::shape, "CSV width does not match the weights");
  return PathSample(TimeGrid(std::move(t)), std::move(w), std::move(data));
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + file.string(), file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + file.string(), file.string());
  out << content;
  if (!out) throw Error(ErrorKind::io, "write failed for " + file.string(), file.string());
}

}  // namespace parasemi

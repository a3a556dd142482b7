#include "cbk/io.hpp"

#include <fstream>
#include <sstream>

#include "cbk/errors.hpp"

namespace cbk::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw PreconditionError(where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t size_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_unsigned()) fail(where + "." + key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<std::string> labels_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array()) fail(where + "." + key, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) fail(where + "." + key + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

}  // namespace

json to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (const auto& x : m.entries()) data.push_back({x.real(), x.imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json to_json(const LinMap& phi) { return {{"p", phi.p()}, {"q", phi.q()}, {"choi", to_json(phi.choi())}}; }

json to_json(const Kernel& k) {
  json values = json::array();
  for (std::size_t i = 0; i < k.n(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < k.n(); ++j) row.push_back(to_json(k.at(i, j)));
    values.push_back(std::move(row));
  }
  return {{"labels", k.labels()}, {"p", k.p()}, {"q", k.q()}, {"values", std::move(values)}};
}

json to_json(const KolDecomp& d) {
  json iota = json::object();
  for (std::size_t i = 0; i < d.labels.size(); ++i) iota[d.labels[i]] = to_json(d.iota[i]);
  return {{"labels", d.labels}, {"p", d.p}, {"q", d.q}, {"m", d.m}, {"J", to_json(d.j)}, {"iota", std::move(iota)}};
}

json to_json(const SubsetChain& c) { return {{"ground", c.ground}, {"chain", c.chain}}; }

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  const std::size_t rows = size_field(j, "rows", where), cols = size_field(j, "cols", where);
  const json& data = field(j, "data", where);
  if (!data.is_array() || data.size() != rows * cols) {
    fail(where + ".data", "expected an array of " + std::to_string(rows * cols) + " [re, im] pairs");
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const json& e = data[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      fail(where + ".data[" + std::to_string(k) + "]", "expected [re, im]");
    }
    m.entries()[k] = cplx(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

LinMap linmap_from_json(const json& j, const std::string& where) {
  const std::size_t p = size_field(j, "p", where), q = size_field(j, "q", where);
  ComplexMatrix c = matrix_from_json(field(j, "choi", where), where + ".choi");
  if (c.rows() != p * q || c.cols() != p * q) fail(where + ".choi", "must be " + std::to_string(p * q) + " square");
  return {p, q, std::move(c)};
}

Kernel kernel_from_json(const json& j, const std::string& where) {
  auto labels = labels_field(j, "labels", where);
  const std::size_t p = size_field(j, "p", where), q = size_field(j, "q", where), n = labels.size();
  const json& values = field(j, "values", where);
  if (!values.is_array() || values.size() != n) fail(where + ".values", "expected " + std::to_string(n) + " rows");
  std::vector<LinMap> entries;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_where = where + ".values[" + std::to_string(i) + "]";
    if (!values[i].is_array() || values[i].size() != n) fail(row_where, "expected " + std::to_string(n) + " entries");
    for (std::size_t jj = 0; jj < n; ++jj) {
      const std::string w = row_where + "[" + std::to_string(jj) + "]";
      LinMap phi = linmap_from_json(values[i][jj], w);
      if (phi.p() != p || phi.q() != q) fail(w, "block sizes differ from the kernel's");
      entries.push_back(std::move(phi));
    }
  }
  try {
    return {std::move(labels), p, q, std::move(entries)};
  } catch (const PreconditionError& e) {
    fail(where, e.what());
  }
}

KolDecomp decomp_from_json(const json& j, const std::string& where) {
  KolDecomp d;
  d.labels = labels_field(j, "labels", where);
  d.p = size_field(j, "p", where);
  d.q = size_field(j, "q", where);
  d.m = size_field(j, "m", where);
  d.j = matrix_from_json(field(j, "J", where), where + ".J");
  if (d.j.rows() != d.d() || d.j.cols() != d.d()) fail(where + ".J", "must be " + std::to_string(d.d()) + " square");
  const json& iota = field(j, "iota", where);
  if (!iota.is_object()) fail(where + ".iota", "expected an object keyed by label");
  for (const auto& l : d.labels) {
    const std::string w = where + ".iota." + l;
    const auto it = iota.find(l);
    if (it == iota.end()) fail(where + ".iota", "missing label \"" + l + "\"");
    ComplexMatrix x = matrix_from_json(*it, w);
    if (x.rows() != d.d() || x.cols() != d.q) fail(w, "must be " + std::to_string(d.d()) + " x " + std::to_string(d.q));
    d.iota.push_back(std::move(x));
  }
  return d;
}

SubsetChain chain_from_json(const json& j, const std::string& where) {
  SubsetChain c;
  c.ground = labels_field(j, "ground", where);
  const json& chain = field(j, "chain", where);
  if (!chain.is_array()) fail(where + ".chain", "expected an array of label arrays");
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const std::string w = where + ".chain[" + std::to_string(i) + "]";
    if (!chain[i].is_array()) fail(w, "expected an array of strings");
    std::vector<std::string> s;
    for (const auto& x : chain[i]) {
      if (!x.is_string()) fail(w, "expected an array of strings");
      s.push_back(x.get<std::string>());
    }
    c.chain.push_back(std::move(s));
  }
  return c;
}

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offsets are 1-based and point just past the offending character.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": invalid JSON (" << e.what() << ")";
    throw PreconditionError(os.str());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace cbk::io

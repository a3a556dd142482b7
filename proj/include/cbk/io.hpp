#pragma once

#include <string>

#include <json.hpp>

#include "cbk/extension.hpp"

namespace cbk::io {

using json = nlohmann::ordered_json;

// Complex numbers are [re, im] pairs; matrices are row-major.
json to_json(const ComplexMatrix& m);
json to_json(const LinMap& phi);
json to_json(const Kernel& k);
json to_json(const KolDecomp& d);
json to_json(const SubsetChain& c);

// `where` names the value in error messages, e.g. "values[0][1].choi".
// Schema violations throw PreconditionError.
ComplexMatrix matrix_from_json(const json& j, const std::string& where = "matrix");
LinMap linmap_from_json(const json& j, const std::string& where = "map");
Kernel kernel_from_json(const json& j, const std::string& where = "kernel");
KolDecomp decomp_from_json(const json& j, const std::string& where = "decomposition");
SubsetChain chain_from_json(const json& j, const std::string& where = "chain");

/// Parses text, reporting syntax errors with line and column.
json parse(const std::string& text, const std::string& source);
json read_file(const std::string& path);
/// Writes j.dump(2) plus a newline.
void write_file(const std::string& path, const json& j);

}  // namespace cbk::io

#pragma once

// The shared JSON schema: quantization descriptors, coefficient matrices,
// certificates and brackets. Complex numbers are [re, im] pairs, matrices
// row-major nested arrays. Every parse error is an InputError carrying the
// JSON pointer of the offending node.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "pllab/base_norm.hpp"
#include "pllab/maps.hpp"
#include "pllab/quantization.hpp"
#include "pllab/tensor_lab.hpp"

namespace pllab {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

Json to_json(Complex z);
Json to_json(const Matrix& m);
Json vector_to_json(const Vector& v);
Json to_json(const BaseNorm& b);
Json to_json(const Quantization& q);
Json to_json(const BilinearMap& r);
Json to_json(const Certificate& c);
Json to_json(const PLRepresentation& rep);
Json to_json(const LRepresentation& rep);
Json to_json(const LowerWitness& w);
Json to_json(const NormBracket& b);
Json to_json(const NormValue& v);

/// `pointer` locates `j` inside the enclosing document, for diagnostics.
Complex complex_from_json(const Json& j, const std::string& pointer = "");
Matrix matrix_from_json(const Json& j, const std::string& pointer = "");
Vector vector_from_json(const Json& j, const std::string& pointer = "");
BaseNorm base_norm_from_json(const Json& j, const std::string& pointer = "");
Quantization quantization_from_json(const Json& j, const std::string& pointer = "");
/// {"id", "provenance", "bound", "map": {"table", "left", "right", "target"}}.
Certificate certificate_from_json(const Json& j, const std::string& pointer = "");

/// Parses `text` as JSON, reporting syntax errors as InputError.
Json parse_document(const std::string& text);

/// Rejects documents whose "schema_version" is present and not "1".
void check_schema_version(const Json& doc);

/// FNV-1a over the compact dump; stable across platforms.
std::string digest(const Json& j);

/// Shortest round-trip decimal form; "inf" and "nan" for non-finite values.
std::string format_double(double x);

}  // namespace pllab

#include "pllab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "pllab/errors.hpp"

namespace pllab {

namespace {

std::string child(const std::string& pointer, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return pointer + "/" + escaped;
}

std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw InputError((pointer.empty() ? std::string("/") : pointer) + ": " + what, pointer.empty() ? "/" : pointer);
}

const Json& member(const Json& j, const std::string& key, const std::string& pointer) {
  if (!j.is_object()) fail(pointer, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(child(pointer, key), "missing required field");
  return *it;
}

double number(const Json& j, const std::string& pointer) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
  }
  if (!j.is_number()) fail(pointer, "expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& pointer) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) fail(pointer, "expected a non-negative integer");
  const auto v = j.get<long long>();
  if (v < 0) fail(pointer, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool flag(const Json& j, const std::string& key, const std::string& pointer) {
  const auto it = j.find(key);
  if (it == j.end()) return false;
  if (!it->is_boolean()) fail(child(pointer, key), "expected a boolean");
  return it->get<bool>();
}

std::vector<double> numbers(const Json& j, const std::string& pointer) {
  if (!j.is_array()) fail(pointer, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], child(pointer, i)));
  return out;
}

Json real_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

template <typename F>
auto rethrow_at(const std::string& pointer, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    if (!e.pointer().empty()) throw;
    throw InputError((pointer.empty() ? std::string("/") : pointer) + ": " + e.what(),
                     pointer.empty() ? "/" : pointer);
  }
}

Json candidates(const std::vector<CandidateValue>& cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back({{"id", c.id}, {"value", real_number(c.value)}});
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const BaseNorm& b) {
  Json j;
  switch (b.kind()) {
    case BaseNorm::Kind::Lp:
      j = {{"type", "lp"}, {"p", real_number(b.p())}, {"weights", b.weights()}};
      break;
    case BaseNorm::Kind::Euclidean:
      j = {{"type", "euclidean"}, {"dim", b.dim()}};
      break;
    case BaseNorm::Kind::Polytope:
      j = {{"type", "polytope"}, {"dual_vertices", to_json(b.vertices())}};
      break;
  }
  j["real"] = b.real();
  return j;
}

Json to_json(const Quantization& q) {
  Json j{{"kind", q.kind_name()}, {"dim", q.dim()}, {"params", Json::object()}};
  switch (q.kind()) {
    case Quantization::Kind::Min:
    case Quantization::Kind::Max:
      j["params"]["base"] = to_json(q.base());
      break;
    case Quantization::Kind::Hilbert:
      break;
    case Quantization::Kind::Lp:
      j["params"] = {{"p", real_number(q.p())}, {"measure", q.measure()}};
      j["inner"] = to_json(q.inner());
      break;
    case Quantization::Kind::Concrete: {
      Json gens = Json::array();
      for (const Matrix& t : q.generators()) gens.push_back(to_json(t));
      j["params"] = {{"k", q.k()}, {"l", q.l()}, {"generators", gens}};
      break;
    }
    case Quantization::Kind::TensorP:
      j["params"]["base"] = to_json(q.base());
      j["inner"] = to_json(q.inner());
      break;
  }
  return j;
}

Json to_json(const BilinearMap& r) {
  return {{"table", to_json(r.table)},
          {"left", to_json(r.left)},
          {"right", to_json(r.right)},
          {"target", to_json(r.target)}};
}

Json to_json(const Certificate& c) {
  return {{"id", c.id},
          {"provenance", c.provenance},
          {"bound", real_number(c.bound)},
          {"user_supplied", c.user_supplied},
          {"map", to_json(c.map)}};
}

Json to_json(const PLRepresentation& rep) {
  Json terms = Json::array();
  for (const auto& t : rep.terms) terms.push_back({{"a", to_json(t.a)}, {"u", to_json(t.u)}, {"v", to_json(t.v)}});
  return {{"type", "pl"}, {"generator", rep.generator}, {"value", real_number(rep.value)}, {"terms", terms}};
}

Json to_json(const LRepresentation& rep) {
  Json u = Json::array(), v = Json::array(), s = Json::array();
  for (const auto& x : rep.u) u.push_back(to_json(x));
  for (const auto& x : rep.v) v.push_back(to_json(x));
  for (const auto& x : rep.supports) s.push_back(to_json(x));
  return {{"type", "l"},     {"generator", rep.generator}, {"value", real_number(rep.value)},
          {"a", to_json(rep.a)}, {"u", u}, {"v", v}, {"supports", s}};
}

Json to_json(const LowerWitness& w) {
  return {{"certificate", w.certificate}, {"provenance", w.provenance},    {"target", w.target},
          {"user_supplied", w.user_supplied}, {"image", to_json(w.image)}, {"value", real_number(w.value)}};
}

Json to_json(const NormBracket& b) {
  Json upper = nullptr;
  if (b.pl_witness) upper = to_json(*b.pl_witness);
  else if (b.l_witness) upper = to_json(*b.l_witness);
  return {{"lower", real_number(b.lower)},
          {"upper", real_number(b.upper)},
          {"gap", b.gap},
          {"lower_witness", to_json(b.lower_witness)},
          {"upper_witness", upper},
          {"max_dimension", b.max_dimension},
          {"lower_candidates", candidates(b.lower_candidates)},
          {"upper_candidates", candidates(b.upper_candidates)}};
}

Json to_json(const NormValue& v) {
  return {{"lower", real_number(v.lower)}, {"upper", real_number(v.value)}, {"exact", v.exact}, {"method", v.method}};
}

Complex complex_from_json(const Json& j, const std::string& pointer) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(pointer, "expected a number or an [re, im] pair");
}

Vector vector_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) fail(pointer, "expected a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], child(pointer, i));
  return v;
}

Matrix matrix_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) fail(pointer, "expected a non-empty array of rows");
  std::size_t cols = 0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].empty()) fail(child(pointer, i), "expected a non-empty row");
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols) fail(child(pointer, i), "row length differs from the first row");
  }
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          complex_from_json(j[i][c], child(child(pointer, i), c));
  return m;
}

BaseNorm base_norm_from_json(const Json& j, const std::string& pointer) {
  const Json& type = member(j, "type", pointer);
  if (!type.is_string()) fail(child(pointer, "type"), "expected a string");
  const auto t = type.get<std::string>();
  const bool real = flag(j, "real", pointer);
  if (t == "euclidean") {
    const std::size_t dim = count(member(j, "dim", pointer), child(pointer, "dim"));
    return rethrow_at(pointer, [&] { return BaseNorm::euclidean(dim, real); });
  }
  if (t == "lp") {
    const double p = number(member(j, "p", pointer), child(pointer, "p"));
    std::vector<double> w;
    if (j.contains("weights")) {
      w = numbers(j["weights"], child(pointer, "weights"));
    } else {
      w.assign(count(member(j, "dim", pointer), child(pointer, "dim")), 1.0);
    }
    if (j.contains("dim") && count(j["dim"], child(pointer, "dim")) != w.size())
      fail(child(pointer, "dim"), "does not match the number of weights");
    return rethrow_at(pointer, [&] { return BaseNorm::lp(p, w, real); });
  }
  if (t == "polytope") {
    Matrix f = matrix_from_json(member(j, "dual_vertices", pointer), child(pointer, "dual_vertices"));
    return rethrow_at(pointer, [&] { return BaseNorm::polytope(std::move(f), real); });
  }
  fail(child(pointer, "type"), "unknown base norm type '" + t + "'");
}

Quantization quantization_from_json(const Json& j, const std::string& pointer) {
  const Json& kind = member(j, "kind", pointer);
  if (!kind.is_string()) fail(child(pointer, "kind"), "expected a string");
  const auto k = kind.get<std::string>();
  const std::string pp = child(pointer, "params");
  const Json params = j.contains("params") ? j["params"] : Json::object();
  if (!params.is_object()) fail(pp, "expected an object");

  auto q = [&]() -> Quantization {
    if (k == "hilbert") {
      const std::size_t dim = count(member(j, "dim", pointer), child(pointer, "dim"));
      return rethrow_at(pointer, [&] { return Quantization::hilbert(dim); });
    }
    if (k == "min" || k == "max") {
      BaseNorm b = base_norm_from_json(member(params, "base", pp), child(pp, "base"));
      return k == "min" ? Quantization::min(std::move(b)) : Quantization::max(std::move(b));
    }
    if (k == "lp") {
      const double p = number(member(params, "p", pp), child(pp, "p"));
      std::vector<double> mu = numbers(member(params, "measure", pp), child(pp, "measure"));
      Quantization inner = j.contains("inner") ? quantization_from_json(j["inner"], child(pointer, "inner"))
                                               : Quantization::scalar();
      return rethrow_at(pointer, [&] { return Quantization::lp(p, std::move(mu), std::move(inner)); });
    }
    if (k == "concrete") {
      const std::size_t kk = count(member(params, "k", pp), child(pp, "k"));
      const std::size_t ll = count(member(params, "l", pp), child(pp, "l"));
      const Json& gens = member(params, "generators", pp);
      if (!gens.is_array()) fail(child(pp, "generators"), "expected an array of matrices");
      std::vector<Matrix> ts;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        ts.push_back(matrix_from_json(gens[i], child(child(pp, "generators"), i)));
        if (static_cast<std::size_t>(ts.back().rows()) != ll || static_cast<std::size_t>(ts.back().cols()) != kk)
          fail(child(child(pp, "generators"), i), "generator must be an l x k matrix");
      }
      return rethrow_at(pointer, [&] { return Quantization::concrete(kk, ll, std::move(ts)); });
    }
    if (k == "tensor_p") {
      BaseNorm b = base_norm_from_json(member(params, "base", pp), child(pp, "base"));
      Quantization inner = quantization_from_json(member(j, "inner", pointer), child(pointer, "inner"));
      return rethrow_at(pointer, [&] { return Quantization::tensor_p(std::move(b), std::move(inner)); });
    }
    fail(child(pointer, "kind"), "unknown quantization kind '" + k + "'");
  }();
  if (j.contains("dim") && count(j["dim"], child(pointer, "dim")) != q.dim())
    fail(child(pointer, "dim"), "declared dimension " + j["dim"].dump() + " but the descriptor has dimension " +
                                    std::to_string(q.dim()));
  return q;
}

Certificate certificate_from_json(const Json& j, const std::string& pointer) {
  const Json& id = member(j, "id", pointer);
  if (!id.is_string()) fail(child(pointer, "id"), "expected a string");
  const Json& prov = member(j, "provenance", pointer);
  if (!prov.is_string()) fail(child(pointer, "provenance"), "expected a string");
  const double bound = number(member(j, "bound", pointer), child(pointer, "bound"));
  const std::string mp = child(pointer, "map");
  const Json& map = member(j, "map", pointer);
  BilinearMap r{matrix_from_json(member(map, "table", mp), child(mp, "table")),
                quantization_from_json(member(map, "left", mp), child(mp, "left")),
                quantization_from_json(member(map, "right", mp), child(mp, "right")),
                quantization_from_json(member(map, "target", mp), child(mp, "target"))};
  return rethrow_at(pointer, [&] {
    return user_certificate(id.get<std::string>(), prov.get<std::string>(), std::move(r), bound);
  });
}

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what(), "/");
  }
}

void check_schema_version(const Json& doc) {
  if (!doc.is_object()) fail("", "expected a JSON object");
  const auto it = doc.find("schema_version");
  if (it == doc.end()) return;
  if (!it->is_string() || it->get<std::string>() != kSchemaVersion)
    fail("/schema_version", std::string("unsupported schema version, expected \"") + kSchemaVersion + "\"");
}

std::string digest(const Json& j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pllab

#include "bosonic/serialization.hpp"

#include "bosonic/phase_space.hpp"

#include <cmath>
#include <string>

namespace bosonic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string(what) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + ": expected an integer");
  return j.get<int>();
}

}  // namespace

Json matrix_to_json(const RealMatrix& M) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return RealMatrix(0, 0);
  if (!j[0].is_array()) throw ParseError(std::string(what) + ": expected an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  RealMatrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(std::string(what) + ": ragged matrix");
    }
    for (Eigen::Index k = 0; k < cols; ++k) M(i, k) = number(row[static_cast<std::size_t>(k)], what);
  }
  return M;
}

Json vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RealVector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

Json to_json(const CharFn& f) {
  return std::visit(
      overloaded{
          [](const node::One& o) { return Json{{"kind", "one"}, {"dim", o.dim}}; },
          [](const node::GaussianKernel& g) {
            return Json{{"kind", "gaussian_kernel"}, {"M", matrix_to_json(g.M)}, {"b", vector_to_json(g.b)}};
          },
          [](const node::Cosine& c) { return Json{{"kind", "cosine"}, {"s", vector_to_json(c.s)}}; },
          [](const node::DisplacementMixture& m) {
            Json pts = Json::array();
            for (const RealVector& p : m.points) pts.push_back(vector_to_json(p));
            return Json{{"kind", "mixture"}, {"weights", m.weights}, {"points", pts}};
          },
          [](const node::Product& p) {
            Json factors = Json::array();
            for (const CharFn& f : p.factors) factors.push_back(to_json(f));
            return Json{{"kind", "product"}, {"factors", factors}};
          },
          [](const node::PullBack& pb) {
            return Json{{"kind", "pullback"}, {"inner", to_json(*pb.inner)}, {"L", matrix_to_json(pb.L)}};
          },
      },
      f.node());
}

CharFn char_fn_from_json(const Json& j, int expected_arity) {
  const std::string kind = field(j, "kind", "char_fn").get<std::string>();
  CharFn f = [&]() -> CharFn {
    if (kind == "one") {
      if (j.contains("dim")) return CharFn::one(integer(j.at("dim"), "one.dim"));
      if (expected_arity < 0) throw ParseError("char_fn: 'one' needs 'dim' here");
      return CharFn::one(expected_arity);
    }
    if (kind == "gaussian_kernel") {
      RealMatrix M = matrix_from_json(field(j, "M", "gaussian_kernel"), "gaussian_kernel.M");
      RealVector b = j.contains("b") ? vector_from_json(j.at("b"), "gaussian_kernel.b")
                                     : RealVector::Zero(M.rows());
      return CharFn::gaussian_kernel(std::move(M), std::move(b));
    }
    if (kind == "cosine") return CharFn::cosine(vector_from_json(field(j, "s", "cosine"), "cosine.s"));
    if (kind == "mixture") {
      const Json& w = field(j, "weights", "mixture");
      const Json& p = field(j, "points", "mixture");
      if (!w.is_array() || !p.is_array()) throw ParseError("mixture: expected arrays");
      std::vector<double> weights;
      std::vector<RealVector> points;
      for (const Json& x : w) weights.push_back(number(x, "mixture.weights"));
      for (const Json& x : p) points.push_back(vector_from_json(x, "mixture.points"));
      return CharFn::mixture(std::move(weights), std::move(points));
    }
    if (kind == "product") {
      const Json& fs = field(j, "factors", "product");
      if (!fs.is_array()) throw ParseError("product: factors must be an array");
      std::vector<CharFn> factors;
      for (const Json& x : fs) factors.push_back(char_fn_from_json(x, expected_arity));
      return CharFn::product(std::move(factors));
    }
    if (kind == "pullback") {
      RealMatrix L = matrix_from_json(field(j, "L", "pullback"), "pullback.L");
      CharFn inner = char_fn_from_json(field(j, "inner", "pullback"), static_cast<int>(L.rows()));
      return CharFn::pullback(std::move(inner), std::move(L));
    }
    throw ParseError("char_fn: unknown kind '" + kind + "'");
  }();
  if (expected_arity >= 0 && f.arity() != expected_arity) {
    throw ParseError("char_fn: arity " + std::to_string(f.arity()) + ", expected " +
                     std::to_string(expected_arity));
  }
  return f;
}

Json to_json(const PositivityCertificate& c) {
  Json witness = Json::array();
  for (const PhasePoint& p : c.witness) witness.push_back(vector_to_json(p));
  return Json{{"A", matrix_to_json(c.A)},
              {"sampler",
               {{"seed", c.sampler.seed},
                {"points_per_set", c.sampler.points_per_set},
                {"sets", c.sampler.sets},
                {"radius", c.sampler.radius},
                {"scales", c.sampler.scales}}},
              {"tol", c.tol},
              {"min_eig", c.min_eig},
              {"hermitian_defect", c.hermitian_defect},
              {"worst_set", c.worst_set},
              {"worst_set_seed", c.worst_set >= 0 ? c.sampler.set_seed(c.worst_set) : 0},
              {"verdict", c.pass ? "pass" : "fail"},
              {"witness", witness}};
}

namespace {

int preset_modes(const Json& j) { return j.contains("n") ? integer(j.at("n"), "preset.n") : 1; }

// Either builds the preset through its checked constructor or, when
// `checked` is false, assembles (X, f) directly.
LinearBosonicChannel channel_impl(const Json& j, const ChannelOptions& options, bool checked) {
  if (!j.is_object()) throw ParseError("channel: expected a JSON object");
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    const int n = preset_modes(j);
    if (n < 1) throw ParseError("channel: n must be positive");
    const RealMatrix I = RealMatrix::Identity(2 * n, 2 * n);
    if (preset == "identity") return identity_channel(n);
    if (preset == "binary_displacement") {
      const RealVector s = vector_from_json(field(j, "s", "binary_displacement"), "s");
      return checked ? binary_displacement(s, options)
                     : channel_unchecked(RealMatrix::Identity(s.size(), s.size()), CharFn::cosine(s));
    }
    if (preset == "displacement_mixture") {
      CharFn f = char_fn_from_json(Json{{"kind", "mixture"},
                                        {"weights", field(j, "weights", "displacement_mixture")},
                                        {"points", field(j, "points", "displacement_mixture")}});
      const RealMatrix Id = RealMatrix::Identity(f.arity(), f.arity());
      return checked ? make_channel(Id, f, options) : channel_unchecked(Id, f);
    }
    if (preset == "amplifier") {
      const double g = number(field(j, "gain", "amplifier"), "gain");
      return checked ? amplifier(g, n, options)
                     : channel_unchecked(std::sqrt(g) * I, CharFn::gaussian_kernel((g - 1.0) * I));
    }
    if (preset == "attenuator") {
      const double eta = number(field(j, "eta", "attenuator"), "eta");
      return checked ? attenuator(eta, n, options)
                     : channel_unchecked(std::sqrt(eta) * I, CharFn::gaussian_kernel((1.0 - eta) * I));
    }
    if (preset == "bk") {
      const double sigma = number(field(j, "sigma", "bk"), "sigma");
      return checked ? bk_noise_channel(sigma, n, options)
                     : channel_unchecked(I, CharFn::gaussian_kernel(2.0 * sigma * I));
    }
    if (preset == "additive_noise") {
      const RealMatrix N = matrix_from_json(field(j, "N", "additive_noise"), "N");
      return checked ? additive_noise(N, options)
                     : channel_unchecked(RealMatrix::Identity(N.rows(), N.cols()),
                                         CharFn::gaussian_kernel(N));
    }
    if (preset == "gaussian") {
      const RealMatrix X = matrix_from_json(field(j, "X", "gaussian"), "X");
      const RealMatrix N = matrix_from_json(field(j, "N", "gaussian"), "N");
      const RealVector d = j.contains("d") ? vector_from_json(j.at("d"), "d") : RealVector::Zero(X.rows());
      return checked ? gaussian_channel(X, N, d, options)
                     : channel_unchecked(X, CharFn::gaussian_kernel(N, d));
    }
    throw ParseError("channel: unknown preset '" + preset + "'");
  }
  const int n = integer(field(j, "n", "channel"), "channel.n");
  const RealMatrix X = matrix_from_json(field(j, "X", "channel"), "channel.X");
  if (n < 1 || X.rows() != 2 * n || X.cols() != 2 * n) {
    throw ParseError("channel: X must be 2n x 2n with n = " + std::to_string(n));
  }
  const CharFn f = char_fn_from_json(field(j, "f", "channel"), 2 * n);
  return checked ? make_channel(X, f, options) : channel_unchecked(X, f);
}

}  // namespace

LinearBosonicChannel channel_from_json(const Json& j, const ChannelOptions& options) {
  return channel_impl(j, options, true);
}

LinearBosonicChannel channel_from_json_unchecked(const Json& j) { return channel_impl(j, {}, false); }

Json to_json(const LinearBosonicChannel& ch) {
  return Json{{"n", ch.n}, {"X", matrix_to_json(ch.X)}, {"f", to_json(ch.f)}};
}

Json to_json(const GaussianDilation& d) {
  Json j{{"n", d.n},
         {"m", d.m},
         {"X", matrix_to_json(d.X)},
         {"Y", matrix_to_json(d.Y)},
         {"s", vector_to_json(d.s)},
         {"S", matrix_to_json(d.completion.S)},
         {"ancilla", to_json(d.ancilla)},
         {"provenance",
          {{"algorithm", to_string(d.provenance.algorithm)},
           {"epsilon", d.provenance.epsilon},
           {"epsilon_used", d.provenance.epsilon_used},
           {"retries", d.provenance.retries}}}};
  if (d.fixed) {
    const FixedUnitaryData& f = *d.fixed;
    j["fixed"] = Json{{"O", matrix_to_json(f.canonical.O)},
                      {"d", vector_to_json(f.canonical.d)},
                      {"k", f.k},
                      {"Y_tilde", matrix_to_json(f.Y_tilde)},
                      {"W", matrix_to_json(f.W)},
                      {"Q", matrix_to_json(f.Q)},
                      {"epsilon", f.epsilon}};
  }
  return j;
}

GaussianDilation dilation_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("dilation: expected a JSON object");
  const int n = integer(field(j, "n", "dilation"), "dilation.n");
  const int m = integer(field(j, "m", "dilation"), "dilation.m");
  const RealMatrix X = matrix_from_json(field(j, "X", "dilation"), "dilation.X");
  RealMatrix Y = matrix_from_json(field(j, "Y", "dilation"), "dilation.Y");
  if (m == 0 && Y.size() == 0) Y = RealMatrix(0, 2 * n);
  if (X.rows() != 2 * n || Y.rows() != 2 * m || Y.cols() != 2 * n) {
    throw ParseError("dilation: X must be 2n x 2n and Y 2m x 2n");
  }
  const RealVector s = j.contains("s") ? vector_from_json(j.at("s"), "dilation.s") : RealVector::Zero(2 * n);
  const CharFn ancilla = char_fn_from_json(field(j, "ancilla", "dilation"), 2 * m);
  GaussianDilation d = make_dilation(X, Y, s, ancilla);
  if (j.contains("S")) {
    const RealMatrix S = matrix_from_json(j.at("S"), "dilation.S");
    if (S.rows() != 2 * (n + m) || S.cols() != 2 * (n + m)) throw ParseError("dilation: S has the wrong size");
    d.completion.S = S;
  }
  if (j.contains("provenance")) {
    const Json& p = j.at("provenance");
    d.provenance.algorithm = dilation_algorithm_from_string(field(p, "algorithm", "provenance").get<std::string>());
    if (p.contains("epsilon")) d.provenance.epsilon = number(p.at("epsilon"), "provenance.epsilon");
    if (p.contains("epsilon_used")) d.provenance.epsilon_used = number(p.at("epsilon_used"), "provenance.epsilon_used");
    if (p.contains("retries")) d.provenance.retries = integer(p.at("retries"), "provenance.retries");
  }
  if (j.contains("fixed")) {
    const Json& f = j.at("fixed");
    FixedUnitaryData data;
    data.canonical.O = matrix_from_json(field(f, "O", "fixed"), "fixed.O");
    data.canonical.d = vector_from_json(field(f, "d", "fixed"), "fixed.d");
    data.k = integer(field(f, "k", "fixed"), "fixed.k");
    data.Y = Y;
    data.Y_tilde = matrix_from_json(field(f, "Y_tilde", "fixed"), "fixed.Y_tilde");
    data.W = matrix_from_json(field(f, "W", "fixed"), "fixed.W");
    data.Q = matrix_from_json(field(f, "Q", "fixed"), "fixed.Q");
    data.epsilon = number(field(f, "epsilon", "fixed"), "fixed.epsilon");
    if (data.Y_tilde.rows() != 2 * n || data.Y_tilde.cols() != 2 * m || data.W.rows() != 2 * m ||
        data.Q.rows() != 2 * n) {
      throw ParseError("dilation: fixed-unitary blocks have the wrong size");
    }
    data.P = Y * data.Y_tilde;
    d.fixed = std::move(data);
  }
  return d;
}

Json to_json(const FockOperator& op) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
    Json r = Json::array();
    Json c = Json::array();
    for (Eigen::Index k = 0; k < op.matrix.cols(); ++k) {
      r.push_back(op.matrix(i, k).real());
      c.push_back(op.matrix(i, k).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return Json{{"n", op.n}, {"cutoff", op.cutoff}, {"re", re}, {"im", im}};
}

FockOperator fock_operator_from_json(const Json& j) {
  const int n = integer(field(j, "n", "fock"), "fock.n");
  const int cutoff = integer(field(j, "cutoff", "fock"), "fock.cutoff");
  const RealMatrix re = matrix_from_json(field(j, "re", "fock"), "fock.re");
  const RealMatrix im = matrix_from_json(field(j, "im", "fock"), "fock.im");
  const auto dim = static_cast<Eigen::Index>(fock_dimension(n, cutoff));
  if (re.rows() != dim || re.cols() != dim || im.rows() != dim || im.cols() != dim) {
    throw ParseError("fock: matrix size does not match cutoff^n");
  }
  FockOperator op{n, cutoff, ComplexMatrix(dim, dim)};
  op.matrix.real() = re;
  op.matrix.imag() = im;
  return op;
}

}  // namespace bosonic

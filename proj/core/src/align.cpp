#include "embalign/align.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "byte_order.hpp"
#include "embalign/errors.hpp"
#include "embalign/fileio.hpp"

namespace embalign {

namespace {

void check_training_pair(const Matrix& x, const Matrix& y, const char* who) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ConsistencyError(std::string(who) + ": source is " + std::to_string(x.rows()) + "x" +
                           std::to_string(x.cols()) + ", target is " + std::to_string(y.rows()) +
                           "x" + std::to_string(y.cols()));
  }
  if (x.rows() == 0 || x.cols() == 0) throw ConsistencyError(std::string(who) + ": empty input");
  if (!x.allFinite() || !y.allFinite()) throw DataError(std::string(who) + ": non-finite input");
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Procrustes: return "procrustes";
    case Method::Linear: return "linear";
    case Method::Ridge: return "ridge";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "procrustes") return Method::Procrustes;
  if (name == "linear") return Method::Linear;
  if (name == "ridge") return Method::Ridge;
  throw ArgumentError("unknown alignment method '" + std::string(name) + "'");
}

Matrix fit_procrustes(const Matrix& x_train, const Matrix& y_train) {
  check_training_pair(x_train, y_train, "fit_procrustes");
  const Matrix m = x_train.transpose() * y_train;
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericalError("fit_procrustes: SVD did not converge");
  Matrix w = svd.matrixU() * svd.matrixV().transpose();
  if (!w.allFinite()) throw NumericalError("fit_procrustes: non-finite result");
  return w;
}

Matrix fit_linear(const Matrix& x_train, const Matrix& y_train) {
  check_training_pair(x_train, y_train, "fit_linear");
  Eigen::BDCSVD<Matrix> svd(x_train, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("fit_linear: SVD did not converge");
  const Vector& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? kPinvRelativeTolerance * sigma(0) : 0.0;
  Vector inv = Vector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
  }
  Matrix w = svd.matrixV() * (inv.asDiagonal() * (svd.matrixU().transpose() * y_train));
  if (!w.allFinite()) throw NumericalError("fit_linear: non-finite result");
  return w;
}

Matrix fit_ridge(const Matrix& x_train, const Matrix& y_train, double alpha) {
  check_training_pair(x_train, y_train, "fit_ridge");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ArgumentError("fit_ridge: alpha must be a positive finite number");
  }
  Matrix gram = x_train.transpose() * x_train;
  gram.diagonal().array() += alpha;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("fit_ridge: Cholesky factorization failed");
  Matrix w = llt.solve(x_train.transpose() * y_train);
  if (!w.allFinite()) throw NumericalError("fit_ridge: non-finite result");
  return w;
}

Matrix fit_solver(Method method, const Matrix& x_train, const Matrix& y_train, double alpha) {
  switch (method) {
    case Method::Procrustes: return fit_procrustes(x_train, y_train);
    case Method::Linear: return fit_linear(x_train, y_train);
    case Method::Ridge: return fit_ridge(x_train, y_train, alpha);
  }
  throw ArgumentError("unknown method");
}

double residual(const Matrix& w, const Matrix& x, const Matrix& y) {
  if (x.cols() != w.rows() || y.cols() != w.cols() || x.rows() != y.rows()) {
    throw ConsistencyError("residual: dimension mismatch");
  }
  return (x * w - y).norm();
}

void AlignmentMap::validate() const {
  stats.validate();
  const auto D = static_cast<Eigen::Index>(stats.D);
  if (w.rows() != D || w.cols() != D) throw ConsistencyError("alignment map: W is not D x D");
  if (!w.allFinite()) throw DataError("alignment map: non-finite W");
  if (method != Method::Ridge && alpha != 0.0) {
    throw ConsistencyError("alignment map: alpha must be 0 unless method is ridge");
  }
  if (method == Method::Ridge && !(alpha > 0.0)) {
    throw ConsistencyError("alignment map: ridge requires alpha > 0");
  }
  if (method == Method::Procrustes) {
    const double err = (w.transpose() * w - Matrix::Identity(D, D)).norm();
    if (err > 1e-8) throw ConsistencyError("alignment map: Procrustes W is not orthogonal");
  }
}

AlignmentMap fit_map(const Matrix& source_train, const Matrix& target_train,
                     const FitOptions& options) {
  const Matrix xs = l2_normalize(source_train);
  const Matrix ys = l2_normalize(target_train);
  AlignmentMap map;
  map.stats = fit_prep(xs, ys);
  const Matrix x = apply_prep(xs, map.stats, Side::Source);
  const Matrix y = apply_prep(ys, map.stats, Side::Target);
  map.method = options.method;
  map.alpha = options.method == Method::Ridge ? options.alpha : 0.0;
  map.w = fit_solver(options.method, x, y, map.alpha);
  map.source_model = options.source_model;
  map.target_model = options.target_model;
  map.seed = options.seed;
  return map;
}

Matrix transform(const Matrix& rows, const AlignmentMap& map) {
  if (static_cast<std::size_t>(rows.cols()) != map.stats.d_a) {
    throw ConsistencyError("transform: input width " + std::to_string(rows.cols()) +
                           " does not match source dimension " + std::to_string(map.stats.d_a));
  }
  return apply_prep(l2_normalize(rows), map.stats, Side::Source) * map.w;
}

double training_residual(const AlignmentMap& map, const Matrix& x_train, const Matrix& y_train) {
  return residual(map.w, apply_prep(l2_normalize(x_train), map.stats, Side::Source),
                  apply_prep(l2_normalize(y_train), map.stats, Side::Target));
}

std::string serialize_map(const AlignmentMap& map) {
  map.validate();
  const std::size_t D = map.stats.D;
  const std::size_t mu_x_bytes = map.stats.d_a * sizeof(double);
  const std::size_t mu_y_bytes = map.stats.d_b * sizeof(double);
  const std::size_t w_bytes = D * D * sizeof(double);

  nlohmann::ordered_json header;
  header["format_version"] = kMapFormatVersion;
  header["method"] = std::string(to_string(map.method));
  header["alpha"] = map.alpha;
  header["d_a"] = map.stats.d_a;
  header["d_b"] = map.stats.d_b;
  header["D"] = D;
  header["n_train"] = map.stats.n_train;
  header["source_model"] = map.source_model;
  header["target_model"] = map.target_model;
  header["seed"] = map.seed;
  header["byte_order"] = "little";
  header["blocks"] = {
      {"mu_x", {{"offset", 0}, {"bytes", mu_x_bytes}}},
      {"mu_y", {{"offset", mu_x_bytes}, {"bytes", mu_y_bytes}}},
      {"w", {{"offset", mu_x_bytes + mu_y_bytes}, {"bytes", w_bytes}, {"layout", "row-major"}}},
  };

  std::string out = header.dump();
  out += '\n';
  out.reserve(out.size() + mu_x_bytes + mu_y_bytes + w_bytes);
  for (Eigen::Index i = 0; i < map.stats.mu_x.size(); ++i) detail::append_le(out, map.stats.mu_x(i));
  for (Eigen::Index i = 0; i < map.stats.mu_y.size(); ++i) detail::append_le(out, map.stats.mu_y(i));
  for (Eigen::Index r = 0; r < map.w.rows(); ++r)
    for (Eigen::Index c = 0; c < map.w.cols(); ++c) detail::append_le(out, map.w(r, c));
  return out;
}

AlignmentMap deserialize_map(std::string_view bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) throw FormatError("alignment map: missing header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, newline));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("alignment map: bad header: ") + e.what());
  }
  const std::string_view payload = bytes.substr(newline + 1);

  AlignmentMap map;
  try {
    if (header.at("format_version").get<int>() != kMapFormatVersion) {
      throw FormatError("alignment map: unsupported format_version");
    }
    map.method = parse_method(header.at("method").get<std::string>());
    map.alpha = header.at("alpha").get<double>();
    map.stats.d_a = header.at("d_a").get<std::size_t>();
    map.stats.d_b = header.at("d_b").get<std::size_t>();
    map.stats.D = header.at("D").get<std::size_t>();
    map.stats.n_train = header.at("n_train").get<std::size_t>();
    map.source_model = header.at("source_model").get<std::string>();
    map.target_model = header.at("target_model").get<std::string>();
    map.seed = header.at("seed").get<std::int64_t>();

    auto read_block = [&](const char* name, std::size_t count) {
      const auto& block = header.at("blocks").at(name);
      const auto offset = block.at("offset").get<std::size_t>();
      const auto size = block.at("bytes").get<std::size_t>();
      if (size != count * sizeof(double) || offset > payload.size() ||
          payload.size() - offset < size) {
        throw FormatError(std::string("alignment map: block '") + name + "' out of range");
      }
      detail::ByteReader reader(payload.substr(offset, size));
      Vector out(static_cast<Eigen::Index>(count));
      for (std::size_t i = 0; i < count; ++i) out(static_cast<Eigen::Index>(i)) = reader.read<double>();
      return out;
    };
    map.stats.mu_x = read_block("mu_x", map.stats.d_a);
    map.stats.mu_y = read_block("mu_y", map.stats.d_b);
    const Vector flat = read_block("w", map.stats.D * map.stats.D);
    const auto D = static_cast<Eigen::Index>(map.stats.D);
    map.w.resize(D, D);
    for (Eigen::Index r = 0; r < D; ++r)
      for (Eigen::Index c = 0; c < D; ++c) map.w(r, c) = flat(r * D + c);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("alignment map: ") + e.what());
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("alignment map: ") + e.what());
  }
  map.validate();
  return map;
}

void save_map(const AlignmentMap& map, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_map(map));
}

AlignmentMap load_map(const std::filesystem::path& path) {
  return deserialize_map(read_file(path));
}

}  // namespace embalign

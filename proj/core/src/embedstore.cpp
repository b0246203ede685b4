#include "embalign/embedstore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "byte_order.hpp"
#include "embalign/errors.hpp"
#include "embalign/fileio.hpp"

namespace embalign {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = pos + 1;
  }
  return out;
}

float parse_float(std::string_view s, std::size_t line_no) {
  float value = 0.0f;
  // from_chars rejects a leading '+', which some writers emit.
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw DataError("value out of float32 range on line " + std::to_string(line_no));
  }
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("cannot parse number '" + std::string(s) + "' on line " +
                      std::to_string(line_no));
  }
  return value;
}

void check_text_field(const std::string& value, const char* what) {
  if (value.empty() || value.find_first_of(",\t\r\n") != std::string::npos) {
    throw FormatError(std::string(what) + " '" + value +
                      "' is empty or contains a separator character");
  }
}

EmbeddingSet load_binary(const fs::path& path, std::string model, std::string dataset) {
  const std::string bytes = read_file(path);
  detail::ByteReader reader(bytes);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError(path.string() + ": missing EMB1 magic");
  }
  reader.take(4);
  const auto n = reader.read<std::uint32_t>();
  const auto d = reader.read<std::uint32_t>();
  const std::uint64_t expected = std::uint64_t{n} * d * sizeof(float);
  if (reader.remaining() != expected) {
    throw FormatError(path.string() + ": payload size " + std::to_string(reader.remaining()) +
                      " does not match header " + std::to_string(n) + "x" + std::to_string(d));
  }
  StorageMatrix rows(n, d);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < d; ++j) rows(i, j) = reader.read<float>();

  const fs::path label_file = labels_path_for(path);
  const std::string label_text = read_file(label_file);
  const auto lines = lines_of(label_text);
  if (lines.size() != n) {
    throw ConsistencyError(label_file.string() + " has " + std::to_string(lines.size()) +
                           " lines but the matrix has " + std::to_string(n) + " rows");
  }
  std::vector<std::string> ids, labels;
  ids.reserve(n);
  labels.reserve(n);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split(lines[i], '\t');
    if (fields.size() != 2) {
      throw FormatError(label_file.string() + ": line " + std::to_string(i + 1) +
                        " is not image_id<TAB>identity");
    }
    ids.emplace_back(fields[0]);
    labels.emplace_back(fields[1]);
  }
  return EmbeddingSet(std::move(model), std::move(dataset), std::move(rows), std::move(ids),
                      std::move(labels));
}

EmbeddingSet load_csv(const fs::path& path, std::string model, std::string dataset) {
  const std::string text = read_file(path);
  const auto lines = lines_of(text);
  if (lines.empty()) throw FormatError(path.string() + ": empty file");
  const auto header = split(lines[0], ',');
  if (header.size() < 3 || header[0] != "image_id" || header[1] != "identity") {
    throw FormatError(path.string() + ": header must be image_id,identity,e0,...");
  }
  const std::size_t d = header.size() - 2;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j + 2] != "e" + std::to_string(j)) {
      throw FormatError(path.string() + ": unexpected column '" + std::string(header[j + 2]) + "'");
    }
  }
  std::vector<std::string_view> body(lines.begin() + 1, lines.end());
  while (!body.empty() && body.back().empty()) body.pop_back();

  StorageMatrix rows(static_cast<Eigen::Index>(body.size()), static_cast<Eigen::Index>(d));
  std::vector<std::string> ids, labels;
  ids.reserve(body.size());
  labels.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    const auto fields = split(body[i], ',');
    if (fields.size() != d + 2) {
      throw FormatError(path.string() + ": line " + std::to_string(i + 2) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(d + 2));
    }
    ids.emplace_back(fields[0]);
    labels.emplace_back(fields[1]);
    for (std::size_t j = 0; j < d; ++j) {
      rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_float(fields[j + 2], i + 2);
    }
  }
  return EmbeddingSet(std::move(model), std::move(dataset), std::move(rows), std::move(ids),
                      std::move(labels));
}

}  // namespace

FileFormat format_from_path(const fs::path& path) {
  return path.extension() == ".csv" ? FileFormat::Csv : FileFormat::Binary;
}

fs::path labels_path_for(const fs::path& matrix_path) {
  fs::path out = matrix_path;
  out.replace_extension(".labels.tsv");
  return out;
}

EmbeddingSet::EmbeddingSet(std::string model_name, std::string dataset_name, StorageMatrix rows,
                           std::vector<std::string> image_ids, std::vector<std::string> labels)
    : model_name_(std::move(model_name)),
      dataset_name_(std::move(dataset_name)),
      rows_(std::move(rows)),
      image_ids_(std::move(image_ids)),
      labels_(std::move(labels)) {
  const auto n = static_cast<std::size_t>(rows_.rows());
  if (image_ids_.size() != n || labels_.size() != n) {
    throw ConsistencyError("embedding set has " + std::to_string(n) + " rows, " +
                           std::to_string(image_ids_.size()) + " image ids and " +
                           std::to_string(labels_.size()) + " labels");
  }
  if (n == 0) throw DataError("embedding set is empty");
  if (rows_.cols() == 0) throw DataError("embedding dimension is zero");
  if (!rows_.allFinite()) {
    for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
      if (!rows_.row(i).allFinite()) {
        throw DataError("row " + std::to_string(i) + " contains a non-finite value");
      }
    }
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(n);
  for (const auto& id : image_ids_) {
    if (!seen.insert(id).second) throw DataError("duplicate image id '" + id + "'");
  }
}

Matrix EmbeddingSet::to_matrix() const { return rows_.cast<double>(); }

Matrix EmbeddingSet::to_matrix(const std::vector<std::size_t>& row_indices) const {
  Matrix out(static_cast<Eigen::Index>(row_indices.size()), rows_.cols());
  for (std::size_t i = 0; i < row_indices.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        rows_.row(static_cast<Eigen::Index>(row_indices[i])).cast<double>();
  }
  return out;
}

EmbeddingSet EmbeddingSet::select(const std::vector<std::size_t>& row_indices) const {
  StorageMatrix rows(static_cast<Eigen::Index>(row_indices.size()), rows_.cols());
  std::vector<std::string> ids, labels;
  ids.reserve(row_indices.size());
  labels.reserve(row_indices.size());
  for (std::size_t i = 0; i < row_indices.size(); ++i) {
    const auto r = row_indices[i];
    if (r >= size()) throw ConsistencyError("row index out of range");
    rows.row(static_cast<Eigen::Index>(i)) = rows_.row(static_cast<Eigen::Index>(r));
    ids.push_back(image_ids_[r]);
    labels.push_back(labels_[r]);
  }
  return EmbeddingSet(model_name_, dataset_name_, std::move(rows), std::move(ids),
                      std::move(labels));
}

bool operator==(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.rows_.rows() != b.rows_.rows() || a.rows_.cols() != b.rows_.cols()) return false;
  // Bitwise comparison so that -0.0 vs 0.0 counts as a difference.
  const auto bytes = static_cast<std::size_t>(a.rows_.size()) * sizeof(float);
  return std::memcmp(a.rows_.data(), b.rows_.data(), bytes) == 0 &&
         a.image_ids_ == b.image_ids_ && a.labels_ == b.labels_ &&
         a.model_name_ == b.model_name_ && a.dataset_name_ == b.dataset_name_;
}

EmbeddingSet load_embeddings(const fs::path& path, FileFormat format, std::string model_name,
                             std::string dataset_name) {
  if (model_name.empty()) model_name = path.stem().string();
  return format == FileFormat::Binary
             ? load_binary(path, std::move(model_name), std::move(dataset_name))
             : load_csv(path, std::move(model_name), std::move(dataset_name));
}

void save_embeddings(const EmbeddingSet& set, const fs::path& path, FileFormat format) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    check_text_field(set.image_ids()[i], "image id");
    check_text_field(set.labels()[i], "label");
  }
  const auto& rows = set.rows();
  if (format == FileFormat::Binary) {
    std::string bytes;
    bytes.reserve(12 + static_cast<std::size_t>(rows.size()) * sizeof(float));
    bytes.append(kMagic, 4);
    detail::append_le(bytes, static_cast<std::uint32_t>(rows.rows()));
    detail::append_le(bytes, static_cast<std::uint32_t>(rows.cols()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
      for (Eigen::Index j = 0; j < rows.cols(); ++j) detail::append_le(bytes, rows(i, j));

    std::string label_text;
    for (std::size_t i = 0; i < set.size(); ++i) {
      label_text += set.image_ids()[i];
      label_text += '\t';
      label_text += set.labels()[i];
      label_text += '\n';
    }
    write_file_atomic(labels_path_for(path), label_text);
    write_file_atomic(path, bytes);
    return;
  }

  std::string text = "image_id,identity";
  for (Eigen::Index j = 0; j < rows.cols(); ++j) text += ",e" + std::to_string(j);
  text += '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    text += set.image_ids()[static_cast<std::size_t>(i)];
    text += ',';
    text += set.labels()[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      // Shortest representation that round-trips the float32 exactly.
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), rows(i, j));
      (void)ec;
      text += ',';
      text.append(buf, end);
    }
    text += '\n';
  }
  write_file_atomic(path, text);
}

std::pair<EmbeddingSet, EmbeddingSet> intersect_on_images(const EmbeddingSet& a,
                                                          const EmbeddingSet& b) {
  std::unordered_map<std::string_view, std::size_t> b_index;
  b_index.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) b_index.emplace(b.image_ids()[i], i);

  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = b_index.find(a.image_ids()[i]);
    if (it == b_index.end()) continue;
    if (a.labels()[i] != b.labels()[it->second]) {
      throw LabelConflictError("image '" + a.image_ids()[i] + "' is labeled '" + a.labels()[i] +
                               "' in " + a.model_name() + " but '" + b.labels()[it->second] +
                               "' in " + b.model_name());
    }
    shared.emplace_back(i, it->second);
  }
  if (shared.empty()) {
    throw EmptyIntersectionError(a.model_name() + " and " + b.model_name() +
                                 " share no image ids");
  }
  std::sort(shared.begin(), shared.end(), [&](const auto& x, const auto& y) {
    return a.image_ids()[x.first] < a.image_ids()[y.first];
  });
  std::vector<std::size_t> rows_a, rows_b;
  rows_a.reserve(shared.size());
  rows_b.reserve(shared.size());
  for (const auto& [ia, ib] : shared) {
    rows_a.push_back(ia);
    rows_b.push_back(ib);
  }
  return {a.select(rows_a), b.select(rows_b)};
}

}  // namespace embalign

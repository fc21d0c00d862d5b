#include <string>

#include "sparsedetect/designs.hpp"
#include "sparsedetect/error.hpp"
#include "text_util.hpp"

namespace sparsedetect::designs {

std::string to_csv(const DesignMatrix& x) {
  std::string out;
  out += std::to_string(x.n()) + "," + std::to_string(x.p()) + "," + to_string(x.spec()) + "\n";
  const Eigen::MatrixXd values = x.dense();
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out += ',';
      out += detail::format_sig(values(i, j), 17);
    }
    out += '\n';
  }
  return out;
}

DesignMatrix from_csv(const std::string& text) {
  auto lines = detail::split(text, '\n');
  while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) fail(ErrorCode::Parse, "design CSV is empty");

  const auto header = detail::split(lines.front(), ',');
  if (header.size() != 3) fail(ErrorCode::Parse, "design CSV line 1: expected 'n,p,variant'");
  const std::size_t n = detail::parse_size(header[0], "n");
  const std::size_t p = detail::parse_size(header[1], "p");
  const DesignSpec spec = parse_spec(std::string(detail::trim(header[2])));
  if (rows(spec) != n || cols(spec) != p)
    fail(ErrorCode::Parse, "design CSV line 1: n,p disagree with variant '" + to_string(spec) + "'");
  if (lines.size() != n + 1)
    fail(ErrorCode::Parse, "design CSV: expected " + std::to_string(n) + " data rows, found " +
                               std::to_string(lines.size() - 1));

  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = detail::split(lines[i + 1], ',');
    if (fields.size() != p)
      fail(ErrorCode::Parse, "design CSV line " + std::to_string(i + 2) + ": expected " +
                                 std::to_string(p) + " fields, found " + std::to_string(fields.size()));
    for (std::size_t j = 0; j < p; ++j)
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          detail::parse_double(fields[j], "matrix entry");
  }
  return DesignMatrix(spec, std::move(values), std::nullopt);
}

void write_csv(const DesignMatrix& x, const std::string& path) { detail::write_file(path, to_csv(x)); }

DesignMatrix read_csv(const std::string& path) { return from_csv(detail::read_file(path)); }

}  // namespace sparsedetect::designs

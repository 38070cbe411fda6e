#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvpolar/grid_calculus.hpp"
#include "tvpolar/linalg.hpp"
#include "tvpolar/polytope_norms.hpp"

namespace tvpolar {

/// Malformed text input; what() reads "<source>:<line>: <reason>".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& reason);
  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// Matrix:       "N", then N rows of N numbers.
// Vector field: "N", then N rows of comp1 followed by N rows of comp2.
// Polygon:      "dim k", then k rows of dim numbers (one vertex per row).
// Blank lines and lines starting with '#' are skipped. Writers use 17
// significant digits.

GridImage read_matrix(std::istream& in, const std::string& source = "<stream>");
VectorField read_field(std::istream& in, const std::string& source = "<stream>");
std::vector<Vec> read_polygon(std::istream& in, const std::string& source = "<stream>");

GridImage read_matrix_file(const std::filesystem::path& path);
VectorField read_field_file(const std::filesystem::path& path);
std::vector<Vec> read_polygon_file(const std::filesystem::path& path);

void write_matrix(std::ostream& out, const GridImage& u);
void write_field(std::ostream& out, const VectorField& g);
void write_polygon(std::ostream& out, const PolytopeNorm& p);

void write_matrix_file(const std::filesystem::path& path, const GridImage& u);
void write_field_file(const std::filesystem::path& path, const VectorField& g);
void write_polygon_file(const std::filesystem::path& path, const PolytopeNorm& p);

/// %.17g
std::string format_exact(double x);
/// %.12g with negative zero printed as 0; for console summaries.
std::string format_short(double x);
/// "(x,y,...)" using format_short.
std::string format_point(const Vec& v);

}  // namespace tvpolar

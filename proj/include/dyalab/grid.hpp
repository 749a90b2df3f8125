#ifndef DYALAB_GRID_HPP_
#define DYALAB_GRID_HPP_

#include <map>
#include <vector>

#include "dyalab/dyadic.hpp"
#include "dyalab/function.hpp"
#include "dyalab/scalar.hpp"

namespace dyalab {

/// Step function on a dyadic window, constant on cells of side 2^{cell_scale[j]}.
/// Cells are stored row-major with the last coordinate fastest.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Rectangle window, std::vector<int> cell_scale);

  const Rectangle& window() const { return window_; }
  const std::vector<int>& cell_scale() const { return cell_scale_; }
  std::size_t dim() const { return window_.dim(); }
  // Number of cells along coordinate j.
  std::size_t extent(std::size_t j) const { return extent_[j]; }
  std::size_t size() const { return cells_.size(); }
  mpq_class cell_volume() const;

  const std::vector<Scalar>& cells() const { return cells_; }
  std::vector<Scalar>& cells() { return cells_; }
  Scalar& operator[](std::size_t i) { return cells_[i]; }
  const Scalar& operator[](std::size_t i) const { return cells_[i]; }

  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::vector<std::size_t>& idx) const;
  // The dyadic interval of cell i along coordinate j.
  Interval cell_interval(std::size_t j, std::size_t i) const;
  Rectangle cell_rect(std::size_t flat) const;

  std::vector<double> to_doubles() const;
  bool same_layout(const GridFunction& o) const {
    return window_ == o.window_ && cell_scale_ == o.cell_scale_;
  }

  friend bool operator==(const GridFunction& a, const GridFunction& b) {
    return a.same_layout(b) && a.cells_ == b.cells_;
  }

 private:
  Rectangle window_;
  std::vector<int> cell_scale_;
  std::vector<std::size_t> extent_;
  std::vector<Scalar> cells_;
};

// Uniform cell scale -resolution in every coordinate.
std::vector<int> uniform_cells(std::size_t dim, int resolution);

// Exact sampling; throws ResolutionTooCoarse if an atom jumps inside a cell.
GridFunction to_grid(const DyadicFunction& f, const Rectangle& window, const std::vector<int>& cell_scale);

// Values of one atom on the cells of a single coordinate.
std::vector<Scalar> sample_atom(const Atom& a, const Interval& window, int cell_scale);

/// Coefficients in the tensor basis of the window: in each coordinate either
/// h_I for I inside the window side above cell scale (eps 0), or the
/// normalized side indicator h^1 of the window side itself (eps 1).
using HaarAnalysis = std::map<HaarIndex, Scalar>;

HaarAnalysis haar_analyze(const GridFunction& f);
GridFunction haar_synthesize(const HaarAnalysis& coeffs, const Rectangle& window,
                             const std::vector<int>& cell_scale);

}  // namespace dyalab

#endif  // DYALAB_GRID_HPP_

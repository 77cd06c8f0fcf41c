#pragma once

#include <cstddef>

#include "rumba/int_matrix.hpp"

namespace rumba {

/// Column-style Hermite normal form: H = A * U with U unimodular.
struct HermiteForm {
  IntMatrix H;
  IntMatrix U;
  /// Number of nonzero (pivot) columns of H; they come first.
  std::size_t rank = 0;
};

/// Computes H = A * U by unimodular column operations. Pivot selection picks
/// the smallest nonzero absolute value in the current row, leftmost on ties.
/// Pivots are positive and entries left of a pivot are reduced into
/// [0, pivot).
HermiteForm hermite_normal_form(const IntMatrix& a);

enum class BasisSource { ComputedKernel, UserSupplied };

/// Columns span ker_Z(A). Construction always checks A * b = 0 for every
/// column against the originating A and rejects zero columns.
class LatticeBasis {
 public:
  LatticeBasis() = default;

  /// Wraps a user-supplied move set (M x K). Throws InputError if any column
  /// is zero or not annihilated by `a`.
  static LatticeBasis user_supplied(const IntMatrix& a, IntMatrix basis);

  const IntMatrix& matrix() const noexcept { return basis_; }
  BasisSource source() const noexcept { return source_; }
  std::size_t dimension() const noexcept { return basis_.rows(); }  // M
  std::size_t size() const noexcept { return basis_.cols(); }       // K
  bool empty() const noexcept { return basis_.cols() == 0; }

 private:
  friend LatticeBasis make_computed_basis(const IntMatrix& a, IntMatrix basis);
  LatticeBasis(IntMatrix basis, BasisSource source)
      : basis_(std::move(basis)), source_(source) {}

  IntMatrix basis_;
  BasisSource source_ = BasisSource::UserSupplied;
};

struct KernelOptions {
  /// Subtract integer multiples of earlier columns while that shrinks the
  /// max-norm. Changes sampler behaviour, so it is opt-in.
  bool size_reduce = false;
};

/// Lattice basis of ker_Z(A) with K = M - rank(A) columns taken from the
/// unimodular transform of the Hermite normal form.
LatticeBasis kernel_lattice_basis(const IntMatrix& a, KernelOptions options = {});

/// Throws InputError unless every column of `basis` is nonzero and in ker(A).
void check_kernel(const IntMatrix& a, const IntMatrix& basis);

}  // namespace rumba

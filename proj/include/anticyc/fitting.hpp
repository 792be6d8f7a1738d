#pragma once

// Finitely presented Lambda_n-modules, their 0-th Fitting ideals, and the
// exact-sequence and duality checks built on them.
//
// A module Lambda_n^b / (columns) is linearized over Z/p^N (or over Z, when
// an integer lift is present) by flattening Lambda_n^b to coordinates
// i * p^n + k for generator i and group element sigma^k.

#include "anticyc/ideal.hpp"
#include "anticyc/intmat.hpp"
#include "anticyc/iwasawa.hpp"

#include <optional>
#include <string>
#include <vector>

namespace anticyc {

using LambdaVector = std::vector<IwasawaElement>;
using IntPolyVector = std::vector<IntPoly>;

/// Group-basis integer coefficients of f(T) modulo T^d - 1.
inline IntVector group_coefficients(const IntPoly& f, std::size_t d) {
  IntVector out(d);
  for (std::size_t k = 0; k < f.coeffs().size(); ++k) out[k % d] += f.coeffs()[k];
  return out;
}

inline IntPoly poly_from_group_coefficients(const IntVector& c) { return IntPoly(c); }

namespace detail {

inline std::vector<int64_t> flatten(const LambdaVector& v) {
  std::vector<int64_t> out;
  for (const auto& e : v) out.insert(out.end(), e.coeffs().begin(), e.coeffs().end());
  return out;
}

inline LambdaVector unflatten(const LayerContext& ctx, std::size_t b, std::span<const int64_t> v) {
  const std::size_t d = ctx.degree();
  LambdaVector out;
  for (std::size_t i = 0; i < b; ++i) out.emplace_back(ctx, std::vector<int64_t>(v.begin() + i * d, v.begin() + (i + 1) * d));
  return out;
}

inline LambdaVector shifted(const LambdaVector& v, int64_t k) {
  LambdaVector out;
  for (const auto& e : v) out.push_back(e.shifted(k));
  return out;
}

/// sigma^k acting blockwise on a flattened integer vector.
inline IntVector block_shift(const IntVector& v, std::size_t d, std::size_t k) {
  IntVector out(v.size());
  for (std::size_t base = 0; base < v.size(); base += d)
    for (std::size_t j = 0; j < d; ++j) out[base + (j + k) % d] = v[base + j];
  return out;
}

inline std::vector<int64_t> block_shift(std::span<const int64_t> v, std::size_t d, std::size_t k) {
  std::vector<int64_t> out(v.size());
  for (std::size_t base = 0; base < v.size(); base += d)
    for (std::size_t j = 0; j < d; ++j) out[base + (j + k) % d] = v[base + j];
  return out;
}

/// Howell form of the Lambda-span of flattened vectors.
inline ZMatrix lambda_span(const ZmodRing& ring, std::size_t width, std::size_t d, const std::vector<std::vector<int64_t>>& vs) {
  ZMatrix rows(ring, 0, width);
  for (const auto& v : vs)
    for (std::size_t k = 0; k < d; ++k) rows.append_row(block_shift(v, d, k));
  return howell_form(rows);
}

/// Greedy Lambda-module generators of a shift-closed submodule given by rows.
inline std::vector<std::vector<int64_t>> lambda_generators(const ZMatrix& module, std::size_t d) {
  const ZMatrix h = howell_form(module);
  std::vector<std::vector<int64_t>> gens;
  ZMatrix span(h.ring(), 0, h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    if (in_row_span(span, h.row(i))) continue;
    gens.push_back(h.row_vector(i));
    span = lambda_span(h.ring(), h.cols(), d, gens);
  }
  return gens;
}

/// Hermite form of the Z[G]-span of flattened integer vectors.
inline IntMatrix integer_lambda_span(std::size_t width, std::size_t d, const std::vector<IntVector>& vs) {
  IntMatrix rows(0, width);
  for (const auto& v : vs)
    for (std::size_t k = 0; k < d; ++k) rows.append_row(block_shift(v, d, k));
  return hermite_form(rows);
}

/// Greedy Z[G]-generators of a shift-closed lattice.
inline std::vector<IntVector> integer_lambda_generators(const IntMatrix& lattice, std::size_t d) {
  const IntMatrix h = hermite_form(lattice);
  std::vector<IntVector> gens;
  IntMatrix span(0, h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    IntVector r = h.row(i);
    if (lattice_contains(span, r)) continue;
    gens.push_back(r);
    span = integer_lambda_span(h.cols(), d, gens);
  }
  return gens;
}

}  // namespace detail

/// Lambda_n^b modulo the span of the relation columns.
struct ModulePresentation {
  LayerContext context;
  std::size_t generators = 0;
  std::vector<LambdaVector> relations;                    // each column has length `generators`
  std::optional<std::vector<IntPolyVector>> integer_lift;  // same shape, exact polynomials in T

  std::size_t relation_count() const { return relations.size(); }

  /// Entry (i, j) of the b x a relation matrix.
  const IwasawaElement& entry(std::size_t i, std::size_t j) const { return relations[j][i]; }

  static ModulePresentation from_columns(const LayerContext& ctx, std::size_t b, std::vector<LambdaVector> cols) {
    ModulePresentation m{ctx, b, std::move(cols), std::nullopt};
    m.validate();
    return m;
  }

  static ModulePresentation from_integer_columns(const LayerContext& ctx, std::size_t b, std::vector<IntPolyVector> cols) {
    ModulePresentation m{ctx, b, {}, std::move(cols)};
    for (const auto& c : *m.integer_lift) {
      LambdaVector col;
      for (const auto& f : c) col.push_back(IwasawaElement::from_poly(ctx, f));
      m.relations.push_back(std::move(col));
    }
    m.validate();
    return m;
  }

  void validate() const {
    for (const auto& c : relations) {
      if (c.size() != generators) throw ValidationError("presentation: relation column has wrong length");
      for (const auto& e : c)
        if (!(e.context() == context)) throw ValidationError("presentation: context mismatch");
    }
    if (integer_lift) {
      if (integer_lift->size() != relations.size()) throw ValidationError("presentation: integer lift shape mismatch");
      for (std::size_t j = 0; j < relations.size(); ++j) {
        if ((*integer_lift)[j].size() != generators) throw ValidationError("presentation: integer lift shape mismatch");
        for (std::size_t i = 0; i < generators; ++i)
          if (!(IwasawaElement::from_poly(context, (*integer_lift)[j][i]) == relations[j][i]))
            throw ValidationError("presentation: integer lift does not reduce to the relation matrix");
      }
    }
  }

  /// Howell form of the Z/p^N-span of all sigma-translates of the relations.
  ZMatrix relation_module() const {
    std::vector<std::vector<int64_t>> cols;
    for (const auto& c : relations) cols.push_back(detail::flatten(c));
    return detail::lambda_span(context.ring(), generators * context.degree(), context.degree(), cols);
  }

  /// Hermite form of the Z-lattice of relations (integer lift required).
  IntMatrix integer_relation_lattice() const {
    if (!integer_lift) throw PreconditionError("presentation: integer lift required");
    const std::size_t d = context.degree();
    std::vector<IntVector> cols;
    for (const auto& c : *integer_lift) {
      IntVector flat;
      for (const auto& f : c) {
        auto g = group_coefficients(f, d);
        flat.insert(flat.end(), g.begin(), g.end());
      }
      cols.push_back(std::move(flat));
    }
    return detail::integer_lambda_span(generators * d, d, cols);
  }

  /// log_p of the order of M / p^N M.
  int log_size() const {
    return static_cast<int>(generators * context.degree()) * context.N() - span_log_size(relation_module());
  }
};

/// Direct sum: block-diagonal presentation.
inline ModulePresentation direct_sum(const ModulePresentation& a, const ModulePresentation& b) {
  if (!(a.context == b.context)) throw PreconditionError("direct_sum: context mismatch");
  const LayerContext& ctx = a.context;
  const std::size_t g = a.generators + b.generators;
  std::vector<LambdaVector> cols;
  for (const auto& c : a.relations) {
    LambdaVector col(g, IwasawaElement(ctx));
    std::copy(c.begin(), c.end(), col.begin());
    cols.push_back(std::move(col));
  }
  for (const auto& c : b.relations) {
    LambdaVector col(g, IwasawaElement(ctx));
    std::copy(c.begin(), c.end(), col.begin() + static_cast<std::ptrdiff_t>(a.generators));
    cols.push_back(std::move(col));
  }
  return ModulePresentation::from_columns(ctx, g, std::move(cols));
}

/// Fitt_0: the ideal generated by the b x b minors of the relation matrix.
inline IdealHandle fitting_ideal(const ModulePresentation& m) {
  const LayerContext& ctx = m.context;
  const std::size_t b = m.generators;
  if (b == 0) return IdealHandle::unit(ctx);
  if (m.relation_count() < b) return IdealHandle::zero(ctx);
  const IwasawaElement one = IwasawaElement::one(ctx);
  std::vector<IwasawaElement> gens;
  ZMatrix span(ctx.ring(), 0, ctx.degree());
  for (const auto& cs : index_subsets(m.relation_count(), b)) {
    std::vector<LambdaVector> sub(b);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j : cs) sub[i].push_back(m.entry(i, j));
    IwasawaElement det = laplace_determinant(sub, one);
    if (det.is_zero() || in_row_span(span, det.coeffs())) continue;
    gens.push_back(det);
    std::vector<std::vector<int64_t>> flat;
    for (const auto& g : gens) flat.push_back(g.coeffs());
    span = detail::lambda_span(ctx.ring(), ctx.degree(), ctx.degree(), flat);
  }
  return IdealHandle::from_generators(ctx, gens);
}

/// M / f M, presented over Lambda_n by adjoining f e_i for every generator.
inline ModulePresentation base_change_mod(const ModulePresentation& m, const IwasawaElement& f) {
  auto cols = m.relations;
  for (std::size_t i = 0; i < m.generators; ++i) {
    LambdaVector col(m.generators, IwasawaElement(m.context));
    col[i] = f;
    cols.push_back(std::move(col));
  }
  return ModulePresentation::from_columns(m.context, m.generators, std::move(cols));
}

/// A Lambda-linear map between presented modules, given by the images of the
/// source generators (each a vector over the target generators).
struct ModuleMap {
  std::vector<LambdaVector> images;

  /// Matrix over Z/p^N of the induced map on flattened coordinates.
  ZMatrix linearize(const LayerContext& ctx, std::size_t source_gens, std::size_t target_gens) const {
    if (images.size() != source_gens) throw ValidationError("module map: wrong number of generator images");
    const std::size_t d = ctx.degree();
    ZMatrix m(ctx.ring(), target_gens * d, source_gens * d);
    for (std::size_t i = 0; i < source_gens; ++i) {
      if (images[i].size() != target_gens) throw ValidationError("module map: image has wrong length");
      for (std::size_t k = 0; k < d; ++k) {
        auto col = detail::flatten(detail::shifted(images[i], static_cast<int64_t>(k)));
        for (std::size_t r = 0; r < col.size(); ++r) m(r, i * d + k) = col[r];
      }
    }
    return m;
  }
};

namespace detail {

/// {x : F x in span(target_rows)} as a Howell basis.
inline ZMatrix preimage(const ZMatrix& f, const ZMatrix& target_rows) {
  const std::size_t src = f.cols(), r = target_rows.rows();
  ZMatrix block(f.ring(), f.rows(), src + r);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t j = 0; j < src; ++j) block(i, j) = f(i, j);
    for (std::size_t j = 0; j < r; ++j) block(i, src + j) = target_rows(j, i);
  }
  ZMatrix ker = kernel_basis(block);
  ZMatrix out(f.ring(), 0, src);
  for (std::size_t i = 0; i < ker.rows(); ++i) out.append_row(ker.row(i).subspan(0, src));
  return howell_form(out);
}

inline ZMatrix column_span(const ZMatrix& f) { return howell_form(f.transpose()); }

inline ZMatrix stack(const ZMatrix& a, const ZMatrix& b) {
  ZMatrix out = a;
  for (std::size_t i = 0; i < b.rows(); ++i) out.append_row(b.row(i));
  return out;
}

}  // namespace detail

struct ExactSequenceReport {
  bool well_defined = false;     // both maps respect the relations
  bool composite_zero = false;   // g o f = 0 on B -> C
  bool exact_at_middle = false;  // ker g = im f
  bool surjective = false;       // g onto C
  std::optional<IdealHandle> fitt_image, fitt_middle, fitt_quotient;
  bool product_in_middle = false;    // Fitt(im f) Fitt(C) in Fitt(B)
  bool middle_in_quotient = false;   // Fitt(B) in Fitt(C)

  bool exact() const { return well_defined && composite_zero && exact_at_middle && surjective; }
  bool holds() const { return exact() && product_in_middle && middle_in_quotient; }
  std::string failure() const {
    if (!well_defined) return "maps are not well defined on the presented modules";
    if (!composite_zero) return "composite of the maps is not zero";
    if (!exact_at_middle) return "sequence is not exact at the middle term";
    if (!surjective) return "second map is not surjective";
    if (!product_in_middle) return "Fitt(image) * Fitt(C) is not contained in Fitt(B)";
    if (!middle_in_quotient) return "Fitt(B) is not contained in Fitt(C)";
    return "";
  }
};

/// Verifies exactness of A -f-> B -g-> C -> 0 over Z/p^N and then the two
/// Fitting ideal containments. Exactness failures stop the analysis.
inline ExactSequenceReport analyze_exact_sequence(const ModulePresentation& a, const ModuleMap& f,
                                                  const ModulePresentation& b, const ModuleMap& g,
                                                  const ModulePresentation& c) {
  const LayerContext& ctx = b.context;
  if (!(a.context == ctx) || !(c.context == ctx)) throw PreconditionError("exact sequence: context mismatch");
  const std::size_t d = ctx.degree();
  ExactSequenceReport rep;
  ZMatrix fm = f.linearize(ctx, a.generators, b.generators);
  ZMatrix gm = g.linearize(ctx, b.generators, c.generators);
  ZMatrix ra = a.relation_module(), rb = b.relation_module(), rc = c.relation_module();

  rep.well_defined = true;
  for (std::size_t i = 0; i < ra.rows() && rep.well_defined; ++i)
    rep.well_defined = in_row_span(rb, fm.apply(ra.row(i)));
  for (std::size_t i = 0; i < rb.rows() && rep.well_defined; ++i)
    rep.well_defined = in_row_span(rc, gm.apply(rb.row(i)));
  if (!rep.well_defined) return rep;

  ZMatrix gf = gm * fm;
  rep.composite_zero = true;
  for (std::size_t j = 0; j < gf.cols() && rep.composite_zero; ++j) {
    std::vector<int64_t> col(gf.rows());
    for (std::size_t i = 0; i < gf.rows(); ++i) col[i] = gf(i, j);
    rep.composite_zero = in_row_span(rc, col);
  }
  if (!rep.composite_zero) return rep;

  ZMatrix ker_g = detail::preimage(gm, rc);
  ZMatrix im_f = howell_form(detail::stack(detail::column_span(fm), rb));
  rep.exact_at_middle = true;
  for (std::size_t i = 0; i < ker_g.rows() && rep.exact_at_middle; ++i) rep.exact_at_middle = in_row_span(im_f, ker_g.row(i));
  if (!rep.exact_at_middle) return rep;

  ZMatrix im_g = howell_form(detail::stack(detail::column_span(gm), rc));
  rep.surjective = span_log_size(im_g) == static_cast<int>(c.generators * d) * ctx.N();
  if (!rep.surjective) return rep;

  // im f = A / f^{-1}(R_B)
  ZMatrix ker_f = detail::preimage(fm, rb);
  std::vector<LambdaVector> cols;
  for (const auto& v : detail::lambda_generators(ker_f, d)) cols.push_back(detail::unflatten(ctx, a.generators, v));
  ModulePresentation image = ModulePresentation::from_columns(ctx, a.generators, std::move(cols));

  rep.fitt_image = fitting_ideal(image);
  rep.fitt_middle = fitting_ideal(b);
  rep.fitt_quotient = fitting_ideal(c);
  rep.product_in_middle = rep.fitt_middle->contains(*rep.fitt_image * *rep.fitt_quotient);
  rep.middle_in_quotient = rep.fitt_quotient->contains(*rep.fitt_middle);
  return rep;
}

/// True when both containments hold; throws PreconditionError naming the
/// failed condition when the data is not an exact sequence.
inline bool exact_sequence_fitting_check(const ModulePresentation& a, const ModuleMap& f, const ModulePresentation& b,
                                         const ModuleMap& g, const ModulePresentation& c) {
  auto rep = analyze_exact_sequence(a, f, b, g, c);
  if (!rep.exact()) throw PreconditionError("exact_sequence_fitting_check: " + rep.failure());
  return rep.holds();
}

/// Checks on 0 -> N Lambda -f-> tilde^- Lambda + tilde^+ Lambda -g-> (tilde^+, tilde^-) -> 0
/// with N = tilde^+ tilde^-, f the diagonal and g(a, b) = a - b. Everything is
/// done on exact Z-lattices and again mod p^N in lattice coordinates.
struct IovitaPollackReport {
  std::size_t rank_sub = 0, rank_middle = 0, rank_quotient = 0;
  bool f_injective = false;
  bool kernel_equals_image = false;
  bool g_surjective = false;
  bool exact_mod_pN = false;
  bool cardinality = false;          // |middle| = |sub| |quotient| mod p^N
  bool sub_is_trivial_rank_one = false;  // N Lambda is Z_p with trivial action, i.e. Lambda / X

  bool exact() const { return f_injective && kernel_equals_image && g_surjective && exact_mod_pN; }
  bool all() const { return exact() && cardinality && sub_is_trivial_rank_one; }
};

inline IntMatrix principal_lattice(const IntPoly& g, std::size_t d) {
  return detail::integer_lambda_span(d, d, {group_coefficients(g, d)});
}

inline IovitaPollackReport iovita_pollack_sequence(const LayerContext& ctx) {
  if (ctx.n() < 1) throw PreconditionError("iovita_pollack_sequence: n must be >= 1");
  const OmegaFamily fam = omega_family(ctx);
  const std::size_t d = ctx.degree();
  const IntMatrix lp = principal_lattice(fam.tilde_plus, d), lm = principal_lattice(fam.tilde_minus, d);
  const IntMatrix sub = principal_lattice(fam.tilde_plus * fam.tilde_minus, d);
  IntMatrix both = lp;
  for (std::size_t i = 0; i < lm.rows(); ++i) both.append_row(lm.row(i));
  const IntMatrix quotient = hermite_form(both);

  // middle = tilde^- Lambda (first block) + tilde^+ Lambda (second block)
  IntMatrix middle(0, 2 * d);
  for (std::size_t i = 0; i < lm.rows(); ++i) {
    IntVector r = lm.row(i);
    r.resize(2 * d);
    middle.append_row(r);
  }
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    IntVector r(d);
    IntVector src = lp.row(i);
    r.insert(r.end(), src.begin(), src.end());
    middle.append_row(r);
  }
  middle = hermite_form(middle);

  IovitaPollackReport rep;
  rep.rank_sub = sub.rows();
  rep.rank_middle = middle.rows();
  rep.rank_quotient = quotient.rows();

  auto f_of = [&](const IntVector& v) {
    IntVector r = v;
    r.insert(r.end(), v.begin(), v.end());
    return r;
  };
  auto g_of = [&](const IntVector& v) {
    IntVector r(d);
    for (std::size_t j = 0; j < d; ++j) r[j] = v[j] - v[d + j];
    return r;
  };

  // coordinate matrices: row i = coordinates of the image of basis vector i
  IntMatrix fc(0, middle.rows()), gc(0, quotient.rows());
  for (std::size_t i = 0; i < sub.rows(); ++i) {
    auto c = hermite_coordinates(middle, f_of(sub.row(i)));
    if (!c) return rep;  // f does not land in the middle lattice
    fc.append_row(*c);
  }
  for (std::size_t i = 0; i < middle.rows(); ++i) {
    auto c = hermite_coordinates(quotient, g_of(middle.row(i)));
    if (!c) return rep;
    gc.append_row(*c);
  }

  rep.f_injective = integer_rank(fc) == sub.rows();
  const IntMatrix ker_g = integer_kernel(gc.transpose());
  rep.kernel_equals_image = hermite_form(ker_g) == hermite_form(fc);
  rep.g_surjective = hermite_form(gc) == IntMatrix::identity(quotient.rows());

  const ZmodRing& ring = ctx.ring();
  auto reduce = [&](const IntMatrix& m) {
    ZMatrix z(ring, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) z(i, j) = ring.reduce(m(i, j));
    return z;
  };
  const ZMatrix fz = reduce(fc), gz = reduce(gc);
  const int N = ctx.N();
  const int log_im_f = span_log_size(howell_form(fz));
  const ZMatrix ker_gz = howell_form(kernel_basis(gz.transpose()));
  const int log_im_g = span_log_size(howell_form(gz));
  const bool inj = howell_form(kernel_basis(fz.transpose())).rows() == 0;
  rep.exact_mod_pN = inj && ker_gz == howell_form(fz) && log_im_g == N * static_cast<int>(rep.rank_quotient);
  rep.cardinality = rep.rank_middle == rep.rank_sub + rep.rank_quotient &&
                    N * static_cast<int>(rep.rank_middle) == span_log_size(ker_gz) + log_im_g &&
                    log_im_f == N * static_cast<int>(rep.rank_sub);
  rep.sub_is_trivial_rank_one = sub.rows() == 1 && detail::block_shift(sub.row(0), d, 1) == sub.row(0);
  return rep;
}

struct DualFittingResult {
  IdealHandle ideal;              // Fitt of Hom(M / torsion, Z_p) with the twisted action
  IdealHandle iota_torsion_free;  // iota(Fitt(M / torsion))
  bool validated_regime;          // the two agree
  std::size_t dual_rank = 0;
};

/// Fitt of (M tensor Q_p/Z_p)^dual, realized as Hom(M / torsion, Z_p) on which
/// sigma acts by phi -> phi o sigma^{-1}.
inline DualFittingResult dual_fitting(const ModulePresentation& m) {
  if (!m.integer_lift) throw PreconditionError("dual_fitting: integer lift required");
  const LayerContext& ctx = m.context;
  const std::size_t d = ctx.degree(), b = m.generators, width = b * d;
  const IntMatrix rel = m.integer_relation_lattice();
  const IntMatrix dual = integer_kernel(rel.rows() == 0 ? IntMatrix(0, width) : rel);
  // saturation of the relations: M / torsion = Z^{bd} / saturated
  const IntMatrix saturated = dual.rows() == 0 ? IntMatrix::identity(width) : integer_kernel(dual);

  auto present = [&](const IntMatrix& lattice) {
    // Lambda^g -> lattice, relations = kernel
    auto gens = detail::integer_lambda_generators(lattice, d);
    const std::size_t g = gens.size();
    IntMatrix images(0, lattice.cols());
    for (const auto& v : gens)
      for (std::size_t k = 0; k < d; ++k) images.append_row(detail::block_shift(v, d, k));
    // images row (j, k) corresponds to coordinate j * d + k of Lambda^g
    const IntMatrix ker = images.rows() == 0 ? IntMatrix(0, 0) : integer_kernel(images.transpose());
    std::vector<IntPolyVector> cols;
    for (const auto& v : detail::integer_lambda_generators(ker, d)) {
      IntPolyVector col;
      for (std::size_t j = 0; j < g; ++j) col.push_back(poly_from_group_coefficients(IntVector(v.begin() + j * d, v.begin() + (j + 1) * d)));
      cols.push_back(std::move(col));
    }
    return ModulePresentation::from_integer_columns(ctx, g, std::move(cols));
  };

  DualFittingResult res;
  res.dual_rank = dual.rows();
  res.ideal = dual.rows() == 0 ? IdealHandle::unit(ctx) : fitting_ideal(present(dual));

  // M / torsion presented directly: Lambda^b / saturated
  std::vector<IntPolyVector> tf_cols;
  for (const auto& v : detail::integer_lambda_generators(saturated, d)) {
    IntPolyVector col;
    for (std::size_t j = 0; j < b; ++j) col.push_back(poly_from_group_coefficients(IntVector(v.begin() + j * d, v.begin() + (j + 1) * d)));
    tf_cols.push_back(std::move(col));
  }
  IdealHandle tf = fitting_ideal(ModulePresentation::from_integer_columns(ctx, b, std::move(tf_cols)));
  std::vector<IwasawaElement> twisted;
  for (const auto& g : tf.generators()) twisted.push_back(g.involution());
  res.iota_torsion_free = tf.is_zero() ? tf : IdealHandle::from_generators(ctx, twisted);
  res.validated_regime = res.ideal == res.iota_torsion_free;
  return res;
}

/// The module (tilde^+, tilde^-) Lambda / tilde^sign Lambda on generators
/// e_+ -> tilde^+, e_- -> tilde^-, with its exact integer presentation.
inline ModulePresentation signed_quotient_module(const LayerContext& ctx, Sign sign) {
  const OmegaFamily fam = omega_family(ctx);
  const std::size_t d = ctx.degree();
  const IntVector tp = group_coefficients(fam.tilde_plus, d), tm = group_coefficients(fam.tilde_minus, d);
  // (a, b) -> a tilde^+ + b tilde^- on flattened coordinates
  IntMatrix map(d, 2 * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) {
      map((j + k) % d, k) += tp[j];
      map((j + k) % d, d + k) += tm[j];
    }
  std::vector<IntPolyVector> cols;
  for (const auto& v : detail::integer_lambda_generators(integer_kernel(map), d))
    cols.push_back({poly_from_group_coefficients(IntVector(v.begin(), v.begin() + d)),
                    poly_from_group_coefficients(IntVector(v.begin() + d, v.end()))});
  IntPolyVector quotient{IntPoly::constant(0), IntPoly::constant(0)};
  quotient[sign == Sign::Plus ? 0 : 1] = IntPoly::constant(1);
  cols.push_back(quotient);
  return ModulePresentation::from_integer_columns(ctx, 2, std::move(cols));
}

}  // namespace anticyc

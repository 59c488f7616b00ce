#include "reludim/family.hpp"

#include "reludim/errors.hpp"

namespace reludim {

PolyFamily::PolyFamily(std::size_t param_dim, std::vector<SparsePoly> slots)
    : param_dim_(param_dim), slots_(std::move(slots)) {
  for (const auto& s : slots_)
    if (s.arity() != param_dim_)
      throw InputError("family slot arity does not match the parameter dimension");
}

PolyFamily PolyFamily::from_expressions(std::size_t param_dim,
                                        const std::vector<std::string>& slot_exprs) {
  std::vector<SparsePoly> slots;
  slots.reserve(slot_exprs.size());
  for (const auto& e : slot_exprs) slots.push_back(parse_poly(e, param_dim));
  return PolyFamily(param_dim, std::move(slots));
}

std::vector<Rational> PolyFamily::evaluate(const std::vector<Rational>& theta) const {
  if (theta.size() != param_dim_) throw InputError("family parameter arity mismatch");
  std::vector<Rational> out;
  out.reserve(slots_.size());
  for (const auto& s : slots_) out.push_back(s.eval(theta));
  return out;
}

PolyMatrix family_jacobian(const PolyFamily& fam) {
  PolyMatrix jac(fam.slot_count(), fam.param_dim(), fam.param_dim());
  for (std::size_t r = 0; r < fam.slot_count(); ++r)
    for (std::size_t c = 0; c < fam.param_dim(); ++c)
      jac.at(r, c) = fam.slots()[r].partial(c);
  return jac;
}

std::vector<Rational> family_difference_eval(const PolyFamily& fam,
                                             const std::vector<Rational>& theta0,
                                             const std::vector<Rational>& theta) {
  auto base = fam.evaluate(theta0);
  auto cur = fam.evaluate(theta);
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] -= base[i];
  return cur;
}

}  // namespace reludim

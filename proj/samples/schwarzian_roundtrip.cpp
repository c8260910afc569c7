// Transforms y''' = 0 (m = 2) by x = f(z), y = f'(z) C w, runs the canonical-class
// test on the result and compares the extracted source with half the Schwarzian of f.
#include <iostream>

#include "itercanon/itercanon.hpp"

using namespace itercanon;

int main()
{
    const int n = 3;
    const Jet f = Jet::from_coefficients(std::vector<Rational>{0, 1, ratio(1, 2), ratio(1, 3)}, default_truncation);

    RationalMatrix c(2);
    c(0, 0) = 1;
    c(0, 1) = 2;
    c(1, 0) = 0;
    c(1, 1) = 1;

    const LinearSystem sys =
        pushforward(LinearSystem::canonical(n, 2, default_truncation), PointTransformation::normal_form(f, c, n));
    std::cout << print_document(system_to_document(sys));

    const CanonicalVerdict v = canonical_class_test(sys);
    std::cout << "canonical class: " << (v.is_canonical_class ? "yes" : "no") << " (to order " << v.order << ")\n";

    const Jet f1 = derive(f);
    const Jet f2 = derive(f1);
    const Jet ratio2 = f2 / f1;
    const Jet half_schwarzian = ratio(1, 2) * (derive(f2) / f1 - ratio(3, 2) * ratio2 * ratio2);
    std::cout << "q matches {f, z}/2: " << (agree(*v.q, half_schwarzian) ? "yes" : "no") << "\n";

    const auto w = superpose(make_basis(*v.q, n, 2), {{1, 0, 0}, {0, 1, 1}});
    std::cout << "superposition residual zero: " << (residual(v.normal_form, w).is_zero() ? "yes" : "no") << "\n";
    return 0;
}

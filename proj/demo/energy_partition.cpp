// Split B against A into a structured part and a low-energy remainder, then
// compare a random Cayley sum graph's deviation on both parts.

#include <cayley.hpp>

#include <iostream>

int main() {
    using namespace cayley;
    const GroupSpec g = GroupSpec::parse("2,2,2,2,2,2");
    const GroupSubset a = GroupSubset::parse(g, "[0,1,2,3,4,5,6,7,9,18,36,45]");
    const GroupSubset b = GroupSubset::parse(g, "[1,2,3,5,6,7,10,33,50,60]");

    const EnergyValue e = additive_energy(a, b);
    const Rational K = energy_ratio(b.size(), a.size(), e);
    std::cout << "E(A,B) = " << e.count << ", K = |A||B|^2/E = " << K.str() << "\n";

    const DecompositionResult r = energy_partition(a, b, K * Rational(4));
    std::cout << "M = 4K, steps = " << r.step_count() << " (bound " << static_cast<double>(r.step_bound) << ")\n";
    std::cout << "B'  = " << r.b_prime.str() << "  E(A,B')  = " << r.b_prime_energy.count << "\n";
    std::cout << "B'' = " << r.b_doubleprime.str() << "  E(A,B'') = " << r.b_doubleprime_energy.count << "\n";
    if (r.b_prime_dim) std::cout << "dim(B') = " << r.b_prime_dim->value << "\n";

    const CayleySample s = random_subset(g, 7);
    std::cout << "|A_random| = " << s.a.size() << ", sigma(A_random; A, B) = " << sigma(s.a, a, b).sigma.str() << "\n";
    return 0;
}

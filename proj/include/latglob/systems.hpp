#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "latglob/system.hpp"

namespace latglob {

/// n x m integer matrices (n < m) whose n-minors are all divisible by p.
/// Points are read row-major; exceptional points are those with every
/// n-minor zero.
SystemPtr minors_system(int n, int m);

/// Degree-d polynomials (a_0, ..., a_d) that are p-Eisenstein; d >= 2.
SystemPtr eisenstein_system(int d);

/// Degree-d polynomials f with f(x + i) p-Eisenstein for some 0 <= i < p;
/// d >= 3.
SystemPtr shifted_eisenstein_system(int d);

/// d = 1, U_{p_j} = {2^n} for 2^n <= j < 2^(n+1).
SystemPtr counterexample_a();

/// d = 1, U_{p_j} = {p_j, p_{j+1}, ..., p_{2^j}}.
SystemPtr counterexample_b();

/// d = 1, U_p empty unless p = p_{2^n}; U_{p_{2^n}} = {m^2} with each m held
/// for m^3 consecutive n, starting from U_{p_1} = {1}.
SystemPtr counterexample_c();

/// Builds a system from a key such as "minors:n=2,m=3", "eisenstein:d=3",
/// "shifted-eisenstein:d=3" or "cex:A". Throws DomainError listing the
/// accepted forms for anything else.
SystemPtr make_system(std::string_view key);

/// The accepted key forms, for error messages and --help.
std::vector<std::string> system_key_forms();

namespace cex {

/// m with U_{p_{2^n}} = {m^2} in counterexample C.
std::uint64_t schedule_root(std::uint64_t n);

/// First n assigned to m, i.e. 1^3 + ... + (m-1)^3.
std::uint64_t block_start(std::uint64_t m);

}  // namespace cex

}  // namespace latglob

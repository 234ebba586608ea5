"""Structure constants of the Hecke algebra in the normalized T basis.

Coefficients are polynomials in xi = v - 1/v with non-negative integer
coefficients; their degree never exceeds the largest finite rank-2 parabolic.
"""

from coxhecke import CoxeterMatrix, build_ball, f_coeff, max_f_degree, t_mult

ball = build_ball(CoxeterMatrix.triangle(3, 3, 3), 8)
sts = ball.parse_word("s.t.s")
print("T_sts * T_sts =", t_mult(ball, sts, sts).to_text())
print("f(sts, sts, sts) in xi:", f_coeff(ball, sts, sts, sts))

survey = max_f_degree(ball, 8)
print(f"max xi-degree over pairs with l(x)+l(y) <= 8: {survey.max_degree}")
for x, y, z in survey.witnesses[:3]:
    print("  attained at", [ball.format_word(e) for e in (x, y, z)])

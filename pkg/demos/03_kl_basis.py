"""Kazhdan-Lusztig polynomials, mu coefficients and products of basis elements."""

from coxhecke import CoxeterMatrix, KLTable, a_survey, build_ball

ball = build_ball(CoxeterMatrix.type_a(3), 6)   # the whole symmetric group S4
kl = KLTable(ball).compute_all()
w0 = max(range(len(ball)), key=ball.length)
nontrivial = [(y, w) for w in range(len(ball)) for y in kl.interval(w) if kl.kl_poly(y, w).to_q_json() != [[0, 1]]]
print(f"S4: {len(nontrivial)} pairs with P(y,w) != 1")
for y, w in nontrivial[:4]:
    print(f"  P({ball.format_word(y)}, {ball.format_word(w)}) = {kl.kl_poly(y, w).to_text()}")

s = ball.parse_word("s1")
print("C_s1 * C_s1 =", kl.c_product(s, s).to_text())

survey = a_survey(kl)
print("a-value of the longest element:", survey.a_scan[w0], "length:", ball.length(w0))

"""The lowest two-sided cell, its distinguished involutions and one ring table."""

from coxhecke import CoxeterMatrix, KLTable, build_ball, d_prime, gamma_set, j_table, lowest_cell

ball = build_ball(CoxeterMatrix.triangle(3, 3, 3), 9)
omega = lowest_cell(ball)
print(f"lowest cell meets the radius-9 ball in {len(omega)} elements")
x = ball.parse_word("r.s.t.s.r")
print("r.s.t.s.r factors as", [ball.format_word(e) for e in omega.witness(x)])

dp = d_prime(ball, omega)
print("distinguished elements:", [ball.format_word(e) for e in dp.elements])

sts = ball.parse_word("s.t.s")
gam = [g for g in gamma_set(ball, sts) if ball.length(g) <= 4]
table = j_table(KLTable(ball).compute_all(), [g for g in gam if ball.inverse(g) in gam], omega=omega, unit=sts)
print("unit element acts as identity:", table.unit_ok)

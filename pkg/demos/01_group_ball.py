"""Enumerate a truncated Coxeter group and look at its word combinatorics."""

from coxhecke import CoxeterMatrix, build_ball, group_profile

m = CoxeterMatrix.triangle(3, 4, 6)
ball = build_ball(m, 6)
print(f"(3,4,6) triangle group, radius 6: {len(ball)} elements")
print("sphere sizes:", [len(ball.ids_of_length(n)) for n in range(7)])

prof = group_profile(m)
print("largest finite rank-2 parabolic length:", prof.a0)

w = ball.parse_word("s.r.s.r")
print("s.r.s.r: length", ball.length(w), "left descents",
      sorted(m.gens[s] for s in ball.descents(w, "left")))
words, truncated = ball.reduced_expressions(w)
print("reduced expressions:", [ball.format_letters(x) for x in words], "truncated" if truncated else "")
print("Bruhat interval below it has", len(ball.bruhat_interval(w)), "elements")
print("inverse of s.t.r:", ball.format_word(ball.inverse(ball.parse_word("s.t.r"))))

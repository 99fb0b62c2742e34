"""Balls and conjugacy classes in a free group versus the Heisenberg group.

The free group's classes grow exponentially with word length, the
Heisenberg group's polynomially.  Run: python3 demos/growth_of_classes.py
"""
from growthcrit import fixtures
from growthcrit.criteria import classify_growth
from growthcrit.enumeration import ball_growth, conjugacy_class_growth, enumerate_ball

for G, word, radius in ((fixtures.free(2), "a", 10), (fixtures.heisenberg(), "x", 14)):
    ball = ball_growth(enumerate_ball(G, radius))
    cls = conjugacy_class_growth(G, G.parse_word(word), radius)
    print(f"{G.name}: |B_n| for n <= {radius}: {ball.values}")
    print(f"  class of {word}: {cls.values}")
    gc = classify_growth(cls)
    print(f"  fitted: {gc.kind}, estimate {gc.estimate:.3f}\n")

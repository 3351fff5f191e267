"""Frozen reference constants shared by tests.

The long decimal is the published 360-digit value of the width-3 growth
limit, truncated to 150 digits; everything derived from it in tests is
computed at matching precision.
"""

LIMIT_REF_150 = (
    "4.23936948154802567187762574204523577210069571125179549983080168783335"
    "8238276728987837054831763341276708855553395893005289580195934799338289"
    "2574897079"
)

C3_PREFIX = "2.0838497"

# audited constants for the width-3 kernel near the root (strip half-width
# from the annulus 10/13 < |t| < 13/10)
AUDITED = dict(a=0.04176, C=1.0, M=3910.0, Mp=94.6, Mf=258.0, b1_over_n=3.05)

PUBLISHED_ERROR_ESTIMATES = {100: 6.95e-4, 200: 5.60e-15, 300: 3.39e-26}
PUBLISHED_RESIDUALS = {100: 1.44e-10, 200: 5.01e-22, 300: 1.73e-33}

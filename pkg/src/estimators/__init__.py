"""
estimators

Sample ratio statistics (T, C, SV, SD, t², ΣX) and their normalizations.
"""

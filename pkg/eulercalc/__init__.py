"""
Exact Euler-calculus engine: Euler characteristic transforms, quadric transforms and Radon
inversion checks on simplicially represented constructible functions.
"""

import hypothesis

# JIT warm-up on first use can blow the default per-example deadline, and
# none of our properties are latency-sensitive.
hypothesis.settings.register_profile("chargelimit", deadline=None)
hypothesis.settings.load_profile("chargelimit")

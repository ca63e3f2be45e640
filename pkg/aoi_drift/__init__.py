"""Age of Information under clock drift: closed forms, Monte Carlo and a Markov-chain oracle."""

__version__ = "0.1.0"

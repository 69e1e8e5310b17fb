"""entityqa: factoid question answering over an annotated corpus, centred
on recognizing entity mentions by taxonomy synset instead of coarse
named-entity categories."""

__version__ = "0.1.0"

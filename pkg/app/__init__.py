"""p3t: universal point sets and straight-line embeddings of planar 3-trees."""

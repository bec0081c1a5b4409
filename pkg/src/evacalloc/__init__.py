"""Evacuation resource-allocation engine.

Stores driver/vehicle pairs, rescue points and shelters in an ontology-style
knowledge base, computes street-graph travel times, and recommends seat-covering
assignments of vehicles to rescue points that minimize total travel time.
"""

__version__ = "0.1.0"

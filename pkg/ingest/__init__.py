"""
Flat-file ingestion and report serialization
"""

"""Field triage toolkit for digital evidence.

Forensically sound scanning for crime-type artifacts, evidence
prioritization, opinion-free observation reports, a coordinator service,
and a backlog queue model.
"""

__version__ = "0.1.0"

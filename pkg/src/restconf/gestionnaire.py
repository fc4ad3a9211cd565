"""
Gestionnaire RESTCONF
=====================

Interprète une requête à l'aide des modèles chargés puis lit ou
écrit le magasin UCI. Commun aux transports CGI et HTTP.

Écriture (POST / PUT) :
1. localisation de la cible et vérification du corps, sans verrou
2. sous le verrou d'écriture : nouvelle vérification sur un état
   relu du magasin, aplatissement, commit
"""

import time
import uuid
from typing import Any, Dict, List, Optional, Tuple

from src.coeur.erreurs import (
    ErreurOrc,
    ErreursValidation,
    MessageMalforme,
    MethodeNonAutorisee,
)
from src.coeur.journalisation import journaliseur
from src.correspondance.aplatissement import json_vers_entrees, resoudre_racines_corps
from src.correspondance.contexte import CibleResolue, ContexteChemin
from src.correspondance.lecture import uci_vers_json
from src.correspondance.localisation import cible_existe, chemins_sous_arbre, localiser
from src.restconf.requete import (
    METHODES,
    TYPE_YANG_JSON,
    ReponseRestconf,
    RequeteRestconf,
    construire_requete,
    reponse_erreur,
)
from src.uci.magasin import AJOUT, CREATION, REMPLACEMENT, MagasinUci, VueLecture
from src.verification.verificateur import FORME_INCORRECTE, NOEUD_INCONNU, ErreurValidation, verifier_arbre
from src.yang.modeles import LISTE, ModuleYang

Modeles = Dict[str, ModuleYang]


# ═══════════════════════════════════════════════════════════
# POINT D'ENTRÉE
# ═══════════════════════════════════════════════════════════

def traiter_echange(
    modeles: Modeles,
    magasin: MagasinUci,
    methode: str,
    chemin_brut: str,
    corps_brut: bytes = b"",
    type_contenu: Optional[str] = None
) -> ReponseRestconf:
    """
    Échange complet à partir des éléments bruts d'une requête HTTP.
    Journalise méthode, URI, statut et durée sous un identifiant d'échange.
    """
    identifiant = uuid.uuid4().hex[:8]
    debut = time.perf_counter()
    chemin = chemin_brut.split("?", 1)[0]

    try:
        requete = construire_requete(methode, chemin_brut, corps_brut, type_contenu)
    except ErreurOrc as e:
        reponse = reponse_erreur(e, chemin)
        if methode.upper() == "HEAD":
            reponse = sans_corps(reponse)
    else:
        reponse = traiter(modeles, magasin, requete, identifiant)

    duree = (time.perf_counter() - debut) * 1000
    journaliseur.info(f"[{identifiant}] {methode} {chemin} -> {reponse.statut} ({duree:.1f} ms)")
    return reponse


def traiter(
    modeles: Modeles,
    magasin: MagasinUci,
    requete: RequeteRestconf,
    identifiant: str = "-"
) -> ReponseRestconf:
    """
    Traite une requête RESTCONF décodée.

    Args:
        modeles: Modèles JIN chargés, par nom de module
        magasin: Magasin UCI
        requete: Requête décodée
        identifiant: Identifiant d'échange pour les journaux

    Returns:
        Réponse ; les erreurs métier deviennent des réponses d'erreur,
        sans corps pour HEAD quel que soit le statut
    """
    reponse = _traiter(modeles, magasin, requete, identifiant)
    if requete.methode == "HEAD":
        return sans_corps(reponse)
    return reponse


def sans_corps(reponse: ReponseRestconf) -> ReponseRestconf:
    """Réponse HEAD : statut et en-têtes de la réponse GET équivalente."""
    return ReponseRestconf(reponse.statut, dict(reponse.entetes))


def _traiter(
    modeles: Modeles,
    magasin: MagasinUci,
    requete: RequeteRestconf,
    identifiant: str
) -> ReponseRestconf:
    try:
        return _Traitement(modeles, magasin, requete).executer()

    except ErreursValidation as e:
        journaliseur.info(f"[{identifiant}] {len(e.erreurs)} erreur(s) de validation, première : {e.message}")
        return reponse_erreur(e, requete.chemin, e.en_dictionnaires())

    except ErreurOrc as e:
        niveau = journaliseur.erreur if e.statut_http >= 500 else journaliseur.info
        niveau(f"[{identifiant}] {type(e).__name__} : {e.message}")
        return reponse_erreur(e, requete.chemin)

    except Exception as e:
        journaliseur.erreur(f"[{identifiant}] Erreur inattendue", exception=e)
        return reponse_erreur(ErreurOrc(f"erreur interne : {e}"), requete.chemin)


# ═══════════════════════════════════════════════════════════
# TRAITEMENT D'UNE REQUÊTE
# ═══════════════════════════════════════════════════════════

class _Traitement:

    def __init__(self, modeles: Modeles, magasin: MagasinUci, requete: RequeteRestconf):
        self.modeles = modeles
        self.magasin = magasin
        self.requete = requete

    def executer(self) -> ReponseRestconf:
        requete = self.requete
        methode = requete.methode

        if not requete.segments:
            autorisees = ["OPTIONS", "HEAD", "GET", "POST"]
            self._controler_methode(autorisees)
            return {
                "OPTIONS": lambda: self._options(autorisees),
                "HEAD": self._get_racine,
                "GET": self._get_racine,
                "POST": self._post_racine,
            }[methode]()

        exiger = methode not in ("PUT", "OPTIONS")
        cible = localiser(self.modeles, requete.segments, self.magasin.vue(), exiger_existence=exiger)
        autorisees = methodes_autorisees(cible)
        self._controler_methode(autorisees)

        return {
            "OPTIONS": lambda: self._options(autorisees),
            "HEAD": lambda: self._get(cible),
            "GET": lambda: self._get(cible),
            "POST": lambda: self._post(cible),
            "PUT": lambda: self._put(cible),
            "DELETE": lambda: self._delete(cible),
        }[methode]()

    def _controler_methode(self, autorisees: List[str]):
        if self.requete.methode not in autorisees:
            raise MethodeNonAutorisee(
                f"méthode {self.requete.methode} non autorisée sur {self.requete.chemin}",
                autorisees,
            )

    # ─────────────────────────────────────────────────────────
    # LECTURE
    # ─────────────────────────────────────────────────────────

    def _options(self, autorisees: List[str]) -> ReponseRestconf:
        return ReponseRestconf(200, {"Allow": ", ".join(autorisees)})

    def _get_racine(self) -> ReponseRestconf:
        lecteur = self.magasin.vue()
        corps: Dict[str, Any] = {}
        for nom_module in sorted(self.modeles):
            module = self.modeles[nom_module]
            for enfant in module.racine.enfants.values():
                cible = CibleResolue(
                    module, enfant, ContexteChemin.depuis_module(module).descendre(enfant)
                )
                if enfant.est_feuille and not cible_existe(cible, lecteur):
                    continue
                valeur = uci_vers_json(module, cible, lecteur)
                if valeur in ({}, []):
                    continue
                corps[cible.nom_qualifie] = valeur
        return _reponse_json(200, corps)

    def _get(self, cible: CibleResolue) -> ReponseRestconf:
        valeur = uci_vers_json(cible.module, cible, self.magasin.vue())
        if cible.est_entree_liste:
            valeur = [valeur]
        return _reponse_json(200, {cible.nom_qualifie: valeur})

    # ─────────────────────────────────────────────────────────
    # ÉCRITURE
    # ─────────────────────────────────────────────────────────

    def _corps(self) -> Any:
        if not self.requete.a_corps:
            raise MessageMalforme(f"{self.requete.methode} exige un corps JSON")
        return self.requete.corps

    def _post_racine(self) -> ReponseRestconf:
        corps = self._corps()
        if not isinstance(corps, dict) or not corps:
            raise ErreursValidation([ErreurValidation("/", FORME_INCORRECTE, "objet JSON non vide attendu")])

        # un corps à la racine peut viser plusieurs modules
        parties: Dict[str, Dict[str, Any]] = {}
        for cle, valeur in corps.items():
            nom_module, separateur, _ = cle.partition(":")
            if not separateur or nom_module not in self.modeles:
                raise ErreursValidation([ErreurValidation(
                    f"/{cle}", NOEUD_INCONNU, f"{cle!r} ne désigne aucun module chargé"
                )])
            parties.setdefault(nom_module, {})[cle] = valeur

        return self._post_cibles([
            (_cible_racine(self.modeles[nom_module]), partie)
            for nom_module, partie in parties.items()
        ])

    def _post(self, cible: CibleResolue) -> ReponseRestconf:
        return self._post_cibles([(cible, self._corps())])

    def _post_cibles(self, cibles: List[Tuple[CibleResolue, Any]]) -> ReponseRestconf:
        plans = [(cible, corps, _mode_post(cible, corps)) for cible, corps in cibles]

        self._verifier(plans, self.magasin.vue())
        with self.magasin.verrou_ecriture():
            lecteur = self.magasin.vue()
            self._verifier(plans, lecteur)
            # un seul commit pour tous les modules du corps
            entrees = []
            for cible, corps, mode in plans:
                entrees.extend(json_vers_entrees(cible.module, cible, corps, mode, lecteur))
            modes = {mode for _, _, mode in plans}
            self.magasin.appliquer_changements(entrees, modes.pop() if len(modes) == 1 else CREATION)

        return ReponseRestconf(201)

    def _put(self, cible: CibleResolue) -> ReponseRestconf:
        corps = self._corps()
        racines = resoudre_racines_corps(cible.module, cible, corps)
        if not all(r.est_cible for r in racines):
            mauvaise = next(r for r in racines if not r.est_cible)
            raise ErreursValidation([ErreurValidation(
                f"/{mauvaise.cle}", NOEUD_INCONNU, f"le corps d'un PUT doit nommer {cible.nom_qualifie}"
            )])

        plans = [(cible, corps, REMPLACEMENT)]
        self._verifier(plans, self.magasin.vue())
        with self.magasin.verrou_ecriture():
            lecteur = self.magasin.vue()
            cible = self._relocaliser(cible, lecteur)
            plans = [(cible, corps, REMPLACEMENT)]
            self._verifier(plans, lecteur)
            existait = cible_existe(cible, lecteur)
            entrees = json_vers_entrees(cible.module, cible, corps, REMPLACEMENT, lecteur)
            self.magasin.appliquer_changements(entrees, REMPLACEMENT, purges=chemins_sous_arbre(cible))

        return ReponseRestconf(204 if existait else 201)

    def _delete(self, cible: CibleResolue) -> ReponseRestconf:
        with self.magasin.verrou_ecriture():
            cible = self._relocaliser(cible, self.magasin.vue())
            self.magasin.supprimer_plusieurs(chemins_sous_arbre(cible))
        return ReponseRestconf(204)

    def _relocaliser(self, cible: CibleResolue, lecteur: VueLecture) -> CibleResolue:
        """Sous le verrou, l'index d'une entrée de liste est recalculé sur l'état courant."""
        if not cible.est_entree_liste:
            return cible
        return localiser(
            self.modeles, self.requete.segments, lecteur,
            exiger_existence=self.requete.methode != "PUT",
        )

    def _verifier(self, plans, lecteur: VueLecture):
        erreurs = []
        for cible, corps, mode in plans:
            erreurs.extend(verifier_arbre(cible.module, cible, corps, lecteur, mode))
        if erreurs:
            raise ErreursValidation(erreurs)


# ═══════════════════════════════════════════════════════════
# AIDES
# ═══════════════════════════════════════════════════════════

def methodes_autorisees(cible: CibleResolue) -> List[str]:
    """Méthodes valides selon le genre du nœud visé."""
    noeud = cible.noeud
    if noeud.genre == LISTE and not cible.est_entree_liste:
        return list(METHODES)
    if noeud.est_feuille or cible.est_entree_liste:
        return ["OPTIONS", "HEAD", "GET", "PUT", "DELETE"]
    return list(METHODES)


def _cible_racine(module: ModuleYang) -> CibleResolue:
    return CibleResolue(module, module.racine, ContexteChemin.depuis_module(module))


def _mode_post(cible: CibleResolue, corps: Any) -> str:
    """Ajout quand le corps vise une liste, création sinon."""
    try:
        racines = resoudre_racines_corps(cible.module, cible, corps)
    except ErreurOrc:
        return CREATION
    if racines and all(r.noeud.genre == LISTE for r in racines):
        return AJOUT
    return CREATION


def _reponse_json(statut: int, corps: Any) -> ReponseRestconf:
    return ReponseRestconf(statut, {"Content-Type": TYPE_YANG_JSON}, corps)

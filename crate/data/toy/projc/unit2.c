int merge_runs ( int index , int total ) {
  total = total + total ;
  total = index - 1 ;
  if ( total < index ) {
    return 2 ;
  }
  String msg = "retry" ;
  int mask = index + 8 ;
  if ( index < index ) {
    return 0 ;
  }
  if ( mask == index ) {
    int acc = index + 6 ;
    index = acc - 1 ;
  }
  total = acc * acc ;
  return acc ;
}
